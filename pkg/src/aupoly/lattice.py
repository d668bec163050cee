"""Exact linear algebra for the pair (N, nu): Gram data, conductor, norm
ideal, the hypothesis gate, and the superlattice M = Z*nu + N.

All arithmetic is exact (Python ints / Fractions); every operation is a
pure function of its inputs and all types are immutable values.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import intmath
from .errors import (
    CompositeNormIdeal,
    ConductorMismatch,
    EvenPrime,
    InternalBasisFailure,
    NonIntegralValues,
    NotPositiveDefinite,
)


def _det3(r):
    return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] ** 2)
            - r[0][1] * (r[0][1] * r[2][2] - r[1][2] * r[0][2])
            + r[0][2] * (r[0][1] * r[1][2] - r[1][1] * r[0][2]))


@dataclass(frozen=True, init=False)
class GramMatrix3:
    """Symmetric positive definite 3x3 integer Gram matrix.

    Diagonal entries are the quadratic values Q(e_i); off-diagonal entries
    are the bilinear values B(e_i, e_j).
    """

    rows: tuple

    def __init__(self, entries):
        rows = [list(map(int, row)) for row in entries]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 matrix")
        for i in range(3):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        m1 = rows[0][0]
        m2 = rows[0][0] * rows[1][1] - rows[0][1] ** 2
        m3 = _det3(rows)
        if m1 <= 0 or m2 <= 0 or m3 <= 0:
            raise NotPositiveDefinite(
                f"leading principal minors {m1}, {m2}, {m3} must all be > 0")
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))

    @classmethod
    def diagonal(cls, a, b, c):
        return cls([[a, 0, 0], [0, b, 0], [0, 0, c]])

    @classmethod
    def from_six(cls, g11, g12, g13, g22, g23, g33):
        return cls([[g11, g12, g13], [g12, g22, g23], [g13, g23, g33]])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def det(self):
        return _det3(self.rows)

    def six(self):
        r = self.rows
        return (r[0][0], r[0][1], r[0][2], r[1][1], r[1][2], r[2][2])

    def quadratic_value(self, x):
        """Q(x) for an integer or rational coordinate triple."""
        r = self.rows
        return (r[0][0] * x[0] * x[0] + r[1][1] * x[1] * x[1]
                + r[2][2] * x[2] * x[2] + 2 * r[0][1] * x[0] * x[1]
                + 2 * r[0][2] * x[0] * x[2] + 2 * r[1][2] * x[1] * x[2])

    def bilinear_value(self, x, y):
        r = self.rows
        return sum(r[i][j] * x[i] * y[j] for i in range(3) for j in range(3))

    def __str__(self):
        return "[" + "; ".join(" ".join(str(v) for v in row)
                               for row in self.rows) + "]"


def discriminant(gram):
    """Determinant of the Gram matrix (positive for valid input)."""
    d = gram.det
    if d <= 0:
        raise NotPositiveDefinite("discriminant must be positive")
    return d


@dataclass(frozen=True, init=False)
class ShiftVector:
    """Rational shift nu = (a e1 + b e2 + c e3) / d in lowest terms.

    gcd(a, b, c, d) == 1, so the conductor of nu equals d.
    """

    numerators: tuple
    denominator: int

    def __init__(self, numerators, denominator):
        nums = [int(n) for n in numerators]
        den = int(denominator)
        if len(nums) != 3 or den == 0:
            raise ValueError("shift needs three numerators and a nonzero denominator")
        if den < 0:
            nums, den = [-n for n in nums], -den
        g = math.gcd(math.gcd(math.gcd(abs(nums[0]), abs(nums[1])),
                              abs(nums[2])), den)
        object.__setattr__(self, "numerators", tuple(n // g for n in nums))
        object.__setattr__(self, "denominator", den // g)

    @classmethod
    def from_fractions(cls, fracs):
        fracs = [Fraction(f) for f in fracs]
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return cls([f * den for f in fracs], den)

    def fractions(self):
        d = self.denominator
        return tuple(Fraction(n, d) for n in self.numerators)

    @property
    def conductor(self):
        return self.denominator

    def translated(self, x0):
        """nu + x0 for a lattice vector x0 (the gcd reduction is a no-op)."""
        d = self.denominator
        return ShiftVector([n + d * int(x) for n, x in zip(self.numerators, x0)], d)

    def reduced(self):
        """Canonical representative with numerators in [0, d)."""
        d = self.denominator
        return ShiftVector([n % d for n in self.numerators], d)

    def __str__(self):
        a, b, c = self.numerators
        return f"({a}, {b}, {c})/{self.denominator}"


def conductor(raw_fractions):
    """Least m >= 1 with m*nu in N, plus the canonical ShiftVector."""
    shift = ShiftVector.from_fractions(raw_fractions)
    return shift.conductor, shift


@dataclass(frozen=True)
class Coset:
    """A shifted lattice nu + N with integer values; the oracle's substrate.

    epsilon is Q(nu); step generates the norm ideal {Q(x) + 2B(nu, x)}.
    Every value of Q on the coset lies in epsilon + step*Z (step 0 means nu
    is the only coset point of its value pattern, which cannot happen for a
    rank-3 lattice).
    """

    gram: GramMatrix3
    shift: ShiftVector
    epsilon: int
    step: int

    def value_at(self, x):
        """Exact Q(nu + x) for an integer triple x (always an integer)."""
        nu = self.shift.fractions()
        v = self.gram.quadratic_value(tuple(nu[i] + x[i] for i in range(3)))
        assert v.denominator == 1
        return int(v)


def _norm_ideal_generators(gram, shift):
    nu = shift.fractions()
    r = gram.rows
    gens = []
    for i in range(3):
        e_i = tuple(1 if k == i else 0 for k in range(3))
        gens.append(gram.quadratic_value(e_i) + 2 * gram.bilinear_value(nu, e_i))
    gens.extend(2 * r[i][i] for i in range(3))
    gens.extend(2 * r[i][j] for i in range(3) for j in range(i + 1, 3))
    return gens


def norm_ideal(gram, shift):
    """Positive generator g of the ideal {Q(x) + 2B(nu, x) : x in N}.

    The generator set is finite because f(x+y) = f(x) + f(y) + 2B(x, y) and
    a^2 - a is always even: {Q(e_i) + 2B(nu, e_i)}, {2Q(e_i)} and
    {2B(e_i, e_j)} generate the whole ideal.  Raises NonIntegralValues when
    the coset is not integer-valued.
    """
    q_nu = Fraction(gram.quadratic_value(shift.fractions()))
    if q_nu.denominator != 1:
        raise NonIntegralValues(f"Q(nu) = {q_nu} is not an integer")
    g = 0
    for v in _norm_ideal_generators(gram, shift):
        v = Fraction(v)
        if v.denominator != 1:
            raise NonIntegralValues(f"norm-ideal generator {v} is not an integer")
        g = math.gcd(g, abs(int(v)))
    return g


def coset(gram, shift):
    """Build the integer-valued Coset (raises NonIntegralValues otherwise)."""
    g = norm_ideal(gram, shift)
    eps = int(gram.quadratic_value(shift.fractions()))
    return Coset(gram, shift, eps, g)


@dataclass(frozen=True)
class Instance:
    """A validated pair (N, nu): norm ideal p^alpha, conductor p^alpha,
    epsilon = Q(nu) a p-adic unit."""

    gram: GramMatrix3
    shift: ShiftVector
    p: int
    alpha: int
    epsilon: int
    scale_applied: int = 0

    @property
    def modulus(self):
        return self.p**self.alpha

    @property
    def dN(self):
        return self.gram.det

    def as_coset(self):
        return Coset(self.gram, self.shift, self.epsilon, self.modulus)

    def translated(self, x0):
        """The instance with nu replaced by nu + x0, x0 in N.

        p and alpha are untouched (translation invariance of the norm
        ideal); epsilon moves by a multiple of p^alpha.
        """
        shift = self.shift.translated(x0)
        eps = int(self.gram.quadratic_value(shift.fractions()))
        assert (eps - self.epsilon) % self.modulus == 0
        return Instance(self.gram, shift, self.p, self.alpha, eps,
                        self.scale_applied)


def shift_translate(instance, x0):
    """Replace nu by nu + x0; the norm ideal is unchanged."""
    return instance.translated(x0)


@dataclass(frozen=True)
class Rejection:
    """Hypothesis-gate rejection that still supports oracle service."""

    reason: str
    detail: str
    coset: Coset | None = None


@dataclass(frozen=True)
class ShortCircuit:
    """ord_p(Q(nu)) >= alpha: definitively not almost universal."""

    coset: Coset
    p: int
    alpha: int
    epsilon_raw: int
    detail: str


def gate(gram, shift, canonicalize=True):
    """Hypothesis gate: returns Instance | ShortCircuit | Rejection.

    Checks, in order: integer values; norm ideal = p^alpha with p odd and
    alpha >= 1; conductor a positive power of the same p; the
    ord_p(Q(nu)) >= alpha short-circuit; unit normalization of epsilon by
    scaling Q on N when 0 < ord_p(Q(nu)) < alpha; and finally gamma == alpha.
    """
    try:
        base = coset(gram, shift)
    except NonIntegralValues as exc:
        return Rejection("non_integral", str(exc))

    if canonicalize:
        shift = shift.reduced()
        base = coset(gram, shift)

    g = base.step
    if g == 1:
        return Rejection("composite_norm_ideal",
                         "norm ideal is all of Z (alpha = 0)", base)
    fac = intmath.factorize(g)
    if len(fac) != 1:
        return Rejection("composite_norm_ideal",
                         f"norm ideal generator {g} is not a prime power", base)
    (p, alpha), = fac.items()
    if p == 2:
        return Rejection("even_prime", "p = 2 conductors are out of scope", base)

    cond = shift.conductor
    gamma, c = 0, cond
    while c % p == 0:
        c //= p
        gamma += 1
    if c != 1 or gamma == 0:
        return Rejection("conductor_mismatch",
                         f"conductor {cond} is not a positive power of {p}", base)

    eps_raw = base.epsilon
    s = intmath.valuation(eps_raw, p)
    if s >= alpha:
        return ShortCircuit(base, p, alpha, eps_raw,
                            f"ord_{p}(Q(nu)) = {s} >= alpha = {alpha}")
    if s > 0:
        scale = p**s
        if any(v % scale for row in gram.rows for v in row):
            return Rejection("conductor_mismatch",
                             f"Gram entries not divisible by {p}^{s} during "
                             "unit normalization", base)
        gram = GramMatrix3([[v // scale for v in row] for row in gram.rows])
        alpha -= s
        base = coset(gram, shift)
        if base.step != p**alpha:
            return Rejection("conductor_mismatch",
                             "norm ideal did not rescale to p^(alpha - s)", base)

    if gamma != alpha:
        return Rejection("conductor_mismatch",
                         f"gamma = {gamma} differs from alpha = {alpha}", base)

    return Instance(gram, shift, p, alpha, base.epsilon, scale_applied=s)


def validate_instance(gram, shift, canonicalize=True):
    """Strict variant of `gate`: returns the Instance or raises."""
    out = gate(gram, shift, canonicalize=canonicalize)
    if isinstance(out, Instance):
        return out
    if isinstance(out, ShortCircuit):
        raise ConductorMismatch(out.detail + " (definitively not almost universal)")
    raise {"even_prime": EvenPrime,
           "composite_norm_ideal": CompositeNormIdeal,
           "conductor_mismatch": ConductorMismatch,
           "non_integral": NonIntegralValues}[out.reason](out.detail)


@dataclass(frozen=True)
class SuperlatticeM:
    """Gram data for M = Z*nu + N together with the index p^alpha."""

    gram_M: GramMatrix3
    index: int
    dM: int
    basis_scaled: tuple = field(default=(), compare=False)


def _hnf_rows(rows):
    """Row Hermite normal form of an integer matrix of full column rank 3.

    Returns a 3x3 upper-triangular basis with positive diagonal entries.
    """
    rows = [list(r) for r in rows]
    basis = []
    for col in range(3):
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            raise InternalBasisFailure("generator matrix lost rank")
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                rr = [a - q * b for a, b in zip(r, piv)]
                (nxt if rr[col] != 0 else rest).append(rr)
            live = nxt
        piv = live[0] if live[0][col] > 0 else [-v for v in live[0]]
        basis.append(piv)
        rows = rest
    for i in range(2, -1, -1):
        for j in range(i):
            q = basis[j][i] // basis[i][i]
            for k in range(3):
                basis[j][k] -= q * basis[i][k]
    return basis


def superlattice(instance):
    """Gram matrix of M = Z*nu + N, with dM * p^(2 alpha) = dN.

    The basis comes from the Hermite normal form of the generators
    {nu, e1, e2, e3} scaled by p^alpha, so it is a genuine global basis even
    when no coordinate of nu is +-1 modulo the conductor.
    """
    d = instance.modulus
    gens = [list(instance.shift.numerators), [d, 0, 0], [0, d, 0], [0, 0, d]]
    basis = _hnf_rows(gens)
    vecs = [tuple(Fraction(v, d) for v in row) for row in basis]
    entries = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            val = Fraction(instance.gram.bilinear_value(vecs[i], vecs[j]))
            if val.denominator != 1:
                raise InternalBasisFailure("Gram of M is not integral")
            entries[i][j] = int(val)
    gram_M = GramMatrix3(entries)
    dM = gram_M.det
    if dM * d * d != instance.dN:
        raise InternalBasisFailure(
            f"dM * p^(2 alpha) = {dM * d * d} != dN = {instance.dN}")
    return SuperlatticeM(gram_M, d, dM, tuple(tuple(r) for r in basis))
