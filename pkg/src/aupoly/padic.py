"""Local field plumbing: square classes, Hilbert symbols, isotropy of
ternary spaces over Q_q.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import intmath
from .errors import DegenerateForm

INFINITY = "inf"


def _square_free_part(x):
    """Integer in the same rational square class as the nonzero rational x."""
    f = Fraction(x)
    n = f.numerator * f.denominator
    if n == 0:
        raise ValueError("zero has no square class")
    return n


@dataclass(frozen=True)
class SquareClass:
    """Square class of Q_q^x, keyed by a small canonical representative.

    Odd q: one of {1, u, q, q*u} with u the least positive nonsquare mod q.
    q = 2: one of {1, 3, 5, 7, 2, 6, 10, 14}.
    """

    prime: int
    representative: int

    def __mul__(self, other):
        assert self.prime == other.prime
        return square_class(self.representative * other.representative, self.prime)

    def __str__(self):
        return f"{self.representative} (mod Q_{self.prime}^x2)"


def square_class(n, q):
    """Canonical SquareClass of the nonzero rational n in Q_q."""
    n = _square_free_part(n)
    v = intmath.valuation(n, q)
    unit = n // q**v
    if q == 2:
        rep = (2 if v % 2 else 1) * (unit % 8)
    else:
        if intmath.legendre(unit, q) == 1:
            rep = 1
        else:
            rep = intmath.least_nonsquare(q)
        if v % 2:
            rep *= q
    return SquareClass(q, rep)


def square_class_reps(q):
    """The canonical square-class representatives, in search order."""
    if q == 2:
        return (1, 3, 5, 7, 2, 6, 10, 14)
    u = intmath.least_nonsquare(q)
    return (1, u, q, q * u)


def _eps2(u):
    return ((u - 1) // 2) % 2


def _omega2(u):
    return ((u * u - 1) // 8) % 2


def hilbert(a, b, q):
    """Local Hilbert symbol (a, b)_q for q prime or the string "inf"."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    a = _square_free_part(a)
    b = _square_free_part(b)
    if q == INFINITY or q == math.inf:
        return -1 if (a < 0 and b < 0) else 1
    if q == 2:
        alpha = intmath.valuation(a, 2)
        beta = intmath.valuation(b, 2)
        u = a >> alpha if a > 0 else -((-a) >> alpha)
        v = b >> beta if b > 0 else -((-b) >> beta)
        e = _eps2(u % 8) * _eps2(v % 8)
        e += alpha * _omega2(v % 8) + beta * _omega2(u % 8)
        return -1 if e % 2 else 1
    alpha = intmath.valuation(a, q)
    beta = intmath.valuation(b, q)
    u = a // q**alpha
    v = b // q**beta
    e = alpha * beta * ((q - 1) // 2)
    sym = (-1) ** (e % 2)
    if beta % 2:
        sym *= intmath.legendre(u, q)
    if alpha % 2:
        sym *= intmath.legendre(v, q)
    return sym


def hilbert_support(a, b):
    """Primes (plus infinity) where (a, b)_q can be nontrivial."""
    a = _square_free_part(a)
    b = _square_free_part(b)
    qs = {2}
    for n in (abs(a), abs(b)):
        qs.update(intmath.factorize(n).keys())
    return sorted(qs) + [INFINITY]


def is_anisotropic(coeffs, q):
    """Whether the ternary space [a, b, c] is anisotropic over Q_q.

    Uses the binary representation criterion: [a, b] represents d over Q_q
    iff (d, -ab)_q = (a, b)_q, and [a, b, c] is isotropic iff [a, b]
    represents -c.
    """
    a, b, c = coeffs
    if a == 0 or b == 0 or c == 0:
        raise DegenerateForm("isotropy test needs three nonzero coefficients")
    return hilbert(-c, -a * b, q) != hilbert(a, b, q)
