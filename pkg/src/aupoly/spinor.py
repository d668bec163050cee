"""Spinor-exception machinery: the field E = Q(sqrt(-p)), local norm
groups, the spinor norm group of O+(M_p) for the instance Jordan shape, and
the containment checks deciding whether rad(dN)' can be a primitive spinor
exception.

The engine itself only consumes the top-level branch conditions; this
module exposes the underlying containments for diagnostics and tests.
"""

from dataclasses import dataclass

from . import intmath, jordan, lattice, padic
from .errors import InternalParity, ShapeViolation


@dataclass(frozen=True)
class SpinorField:
    """E = Q(sqrt(-p)) for an odd prime p = 7 mod 8 (so 2 splits and E is
    ramified only at p)."""

    p: int

    def __post_init__(self):
        if not intmath.is_prime(self.p) or self.p % 8 != 7:
            raise ShapeViolation(f"field needs a prime p = 7 mod 8, got {self.p}")

    @property
    def discriminant_generator(self):
        return -self.p


def splits(q, field):
    """Splitting behavior of the rational prime q in E."""
    p = field.p
    if q == p:
        return "ramified"
    if q == 2:
        # -p = 1 mod 8, so -p is a 2-adic square
        return "split"
    return "split" if intmath.legendre(-p, q) == 1 else "inert"


def norm_group_contains(q, field, s):
    """Membership of the nonzero rational s in the local norm group N_q(E)."""
    behavior = splits(q, field)
    if behavior == "split":
        return True
    cls = padic.square_class(s, q)
    if behavior == "inert":
        # norms are exactly the elements of even valuation
        return cls.representative % q != 0 if q != 2 else cls.representative % 2 != 0
    # ramified: N_p(E) = {1, p} Q_p^x2, i.e. unit part a square mod p
    n = padic._square_free_part(s)
    v = intmath.valuation(n, q)
    return intmath.legendre(n // q**v, q) == 1


@dataclass(frozen=True)
class ThetaGroup:
    """Subgroup of Q_p^x / Q_p^x2 given by its square classes."""

    prime: int
    classes: frozenset

    def contains(self, s):
        return padic.square_class(s, self.prime) in self.classes

    def contained_in_norm_group(self, field):
        return all(
            norm_group_contains(self.prime, field, cls.representative)
            for cls in self.classes)


def theta_Mp(epsilon, beta, i, gamma, j, p):
    """Spinor norm group of O+(M_p) for M_p = <epsilon, p^i beta, p^j gamma>.

    Implements the displayed four-class formula for the instance shape
    0 < i <= j with unit epsilon, beta, gamma; raises ShapeViolation
    otherwise.
    """
    if not (1 <= i <= j):
        raise ShapeViolation(f"need 1 <= i <= j, got i={i}, j={j}")
    for u in (epsilon, beta, gamma):
        if u % p == 0:
            raise ShapeViolation("epsilon, beta, gamma must be p-adic units")
    raw = [1,
           epsilon * beta * p**i,
           epsilon * gamma * p**j,
           beta * gamma * p**(i + j)]
    classes = frozenset(padic.square_class(v, p) for v in raw)
    group = ThetaGroup(p, classes)
    # closure sanity: the displayed set is a group modulo squares
    for a in classes:
        for b in classes:
            if a * b not in classes:
                raise InternalParity("theta classes not closed under products")
    return group


def theta_from_instance(instance, sup=None):
    """theta(O+(M_p)) computed from the instance's superlattice Jordan data."""
    sup = sup or lattice.superlattice(instance)
    split = jordan.jordan_split(sup.gram_M, instance.p)
    exps = split.exponents()
    units = split.unit_block_units()
    if len(exps) != 3 or exps[0] != 0 or exps[1] < 1:
        raise ShapeViolation(f"M_p does not have the instance shape: {exps}")
    eps_unit, beta, gamma = units
    p = instance.p
    if intmath.legendre(eps_unit, p) != intmath.legendre(instance.epsilon, p):
        raise InternalParity("unimodular Jordan unit disagrees with epsilon")
    return theta_Mp(eps_unit, beta, exps[1], gamma, exps[2], p)


def spinor_exception_obstruction(instance, t):
    """Which branch condition (if any) certifies that t cannot be a
    primitive spinor exception of gen(M).

    Returns "a", "b", "c", or "possible".  Callers must pass t coprime to p
    (rad(dN)' by construction); p = 7 mod 8 is required for the field E to
    exist at all.
    """
    p = instance.p
    if t % p == 0:
        raise ValueError("t must be coprime to p")
    field = SpinorField(p)
    dN = instance.dN
    if intmath.valuation(dN, p) % 2 == 0:
        return "a"
    rad = intmath.radical(dN)
    for q in intmath.factorize(rad):
        if q not in (2, p) and intmath.legendre(-p, q) == -1:
            return "b"
    if intmath.legendre(instance.epsilon, p) == -1:
        return "c"
    return "possible"
