"""Local representability over Z_q and the local-universality decision.

The primary deciders are exact: a found witness certifies representability
through a Hensel lift, and a negative verdict comes from the Jordan
structure (odd q: valuation descent on the diagonal form; q = 2: complete
value masks modulo 2^m, m past the Hensel threshold).  The literal
lexicographic residue search at the report precision is kept for small
domains and as the cross-validation oracle in the test suite.
"""

from dataclasses import dataclass

import numpy as np

from . import intmath, jordan, padic
from .errors import DegenerateForm, NotUniversalAt2, PrecisionTooLow


def _as_matrix(gram_or_diag):
    if hasattr(gram_or_diag, "rows"):
        return [list(r) for r in gram_or_diag.rows]
    g = list(gram_or_diag)
    if len(g) == 3 and all(isinstance(v, int) for v in g):
        return [[g[0], 0, 0], [0, g[1], 0], [0, 0, g[2]]]
    return [list(r) for r in g]


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


# ---------------------------------------------------------------------------
# odd q: valuation descent on the Jordan diagonal

def _repr_diag_odd(pairs, c, q):
    """Does <q^a1 u1, q^a2 u2, q^a3 u3> represent c over Z_q (q odd)?

    pairs is a sorted list of (exponent, unit).  Descends through the
    valuation layers; each step is justified by reduction mod q plus a
    Hensel lift on a unit-gradient coordinate.
    """
    if c == 0:
        return True
    k = intmath.valuation(c, q)
    c0 = c // q**k
    while True:
        pairs = sorted(pairs)
        (a1, u1), (a2, u2), (a3, u3) = pairs
        if a1 >= 1:
            if k == 0:
                return False
            pairs = [(a1 - 1, u1), (a2 - 1, u2), (a3 - 1, u3)]
            k -= 1
            continue
        if k == 0:
            return a2 == 0 or intmath.legendre(c0 * u1, q) == 1
        if a2 == 0:
            if intmath.legendre(-u1 * u2, q) == 1 or a3 == 0:
                return True
            pairs = [(2, u1), (2, u2), (a3, u3)]
        else:
            pairs = [(2, u1), (a2, u2), (a3, u3)]


def _odd_pairs(matrix, q, hint=None):
    diag_ok = all(matrix[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    if diag_ok:
        entries = [matrix[i][i] for i in range(3)]
        if any(v == 0 for v in entries):
            raise DegenerateForm("degenerate diagonal form")
        pairs = []
        for v in entries:
            a = intmath.valuation(v, q)
            pairs.append((a, v // q**a))
        return sorted(pairs)
    split = hint or jordan.jordan_split(matrix, q)
    return sorted((c.exponent, c.units[0]) for c in split.components)


# ---------------------------------------------------------------------------
# q = 2: complete value masks modulo 2^m

def _mask_unit_block(exp, unit, m):
    width = 1 << m
    mask = 0
    if exp >= m:
        return 1  # everything collapses to 0
    for t in range(width):
        mask |= 1 << ((unit * t * t << exp) % width)
    return mask


def _mask_improper_block(exp, kind, m):
    width = 1 << m
    mask = 1  # 0 is always a value
    if kind == "A00":
        # 2^(exp+1) * x*y covers all of 2^(exp+1) Z_2
        step = 1 << (exp + 1)
        if step >= width:
            return 1
        for v in range(0, width, step):
            mask |= 1 << v
        return mask
    # A22: 2^(exp+1) * (x^2 + x*y + y^2); the binary form is the norm form
    # of the unramified quadratic extension, so its nonzero values are
    # exactly 4^s * (2-adic units)
    s = 0
    while exp + 1 + 2 * s < m:
        base = 1 << (exp + 1 + 2 * s)
        for odd in range(1, width // base, 2):
            mask |= 1 << ((base * odd) % width)
        s += 1
    return mask


def _sumset(mask_a, mask_b, m):
    width = 1 << m
    full = (1 << width) - 1
    out = 0
    a = mask_a
    while a:
        low = a & -a
        shift = low.bit_length() - 1
        out |= ((mask_b << shift) | (mask_b >> (width - shift))) & full if shift \
            else mask_b
        a ^= low
    return out


def _value_mask_z2(matrix, m):
    split = jordan.jordan_split(matrix, 2, precision=max(
        intmath.valuation(_det3(matrix), 2) + 3, m + 2))
    mask = None
    for comp in split.components:
        if comp.kind == "unit":
            unit = comp.units[0]
            # recover enough 2-adic digits of the unit for the mask
            blk = _mask_unit_block(comp.exponent, unit, m)
        else:
            blk = _mask_improper_block(comp.exponent, comp.kind, m)
        mask = blk if mask is None else _sumset(mask, blk, m)
    return mask


def _repr_z2(matrix, c):
    """Does the lattice represent c over Z_2?  Exact for any integer c."""
    if c == 0:
        return True
    k = intmath.valuation(c, 2)
    m = max(6, 2 * k + 4)
    mask = _value_mask_z2(matrix, m)
    return bool(mask >> (c % (1 << m)) & 1)


# ---------------------------------------------------------------------------
# public deciders

def represents_zq(gram_or_diag, c, q):
    """Exact decision: is c represented by the form over Z_q?"""
    matrix = _as_matrix(gram_or_diag)
    if _det3(matrix) == 0:
        raise DegenerateForm("representation test needs a nondegenerate form")
    if q == 2:
        return _repr_z2(matrix, c)
    return _repr_diag_odd(_odd_pairs(matrix, q), c, q)


@dataclass(frozen=True)
class LocalReport:
    prime: int
    universal: bool
    missed_class: padic.SquareClass | None
    precision_used: int


def local_universal(gram_or_diag, q):
    """Does the q-adic completion represent every q-adic integer?

    Checks the finitely many square-class representatives; values are
    closed under unit-square and q^2 scaling, so these decide everything.
    The reported precision is the Hensel-certified depth
    ord_q(dN) + ord_q(c) + 4 for the deepest class examined.
    """
    matrix = _as_matrix(gram_or_diag)
    det = _det3(matrix)
    if det == 0:
        raise DegenerateForm("local_universal needs a nondegenerate form")
    dval = intmath.valuation(det, q)
    reps = padic.square_class_reps(q)
    missed = None
    precision = dval + 4
    if q == 2:
        mask = _value_mask_z2(matrix, 6)
        for c in reps:
            precision = max(precision, dval + intmath.valuation(c, 2) + 4)
            if not mask >> (c % 64) & 1:
                missed = padic.square_class(c, 2)
                break
    else:
        pairs = _odd_pairs(matrix, q)
        for c in reps:
            precision = max(precision, dval + intmath.valuation(c, q) + 4)
            if not _repr_diag_odd(pairs, c, q):
                missed = padic.square_class(c, q)
                break
    return LocalReport(q, missed is None, missed, precision)


def primitive_rep_z2(gram_or_diag, value):
    """Classification of primitive 2-adic representation.

    For a 2-adically universal ternary lattice: ord_2(dK) = 0 means every
    element is primitively represented; ord_2(dK) = 1 means every element
    except those in 4 * Z_2^x (where every representation is imprimitive).
    """
    matrix = _as_matrix(gram_or_diag)
    report = local_universal(matrix, 2)
    if not report.universal:
        raise NotUniversalAt2(f"missed class {report.missed_class}")
    dval = intmath.valuation(_det3(matrix), 2)
    if dval >= 2:
        raise NotUniversalAt2("universal lattice cannot have ord_2(dK) >= 2")
    if dval == 1 and value != 0 and intmath.valuation(value, 2) == 2:
        return "imprimitive_only"
    return "primitive"


# ---------------------------------------------------------------------------
# literal lexicographic residue search (small domains; test oracle)

def residue_search(gram_or_diag, c, q, e, primitive_only=False,
                   max_domain=3 * 10**8):
    """First witness x in lex order with Q(x) = c mod q^e, or None.

    Complete lexicographic sweep of (Z/q^e)^3; domains larger
    than max_domain raise PrecisionTooLow rather than degrade.
    """
    matrix = _as_matrix(gram_or_diag)
    mod = q**e
    if mod**3 > max_domain:
        raise PrecisionTooLow(f"domain ({q}^{e})^3 exceeds the search budget")
    g = np.array(matrix, dtype=np.int64)
    r = np.arange(mod, dtype=np.int64)
    x2, x3 = np.meshgrid(r, r, indexing="ij")
    q22 = g[1, 1] * x2 * x2
    q33 = g[2, 2] * x3 * x3
    cross = 2 * g[1, 2] * x2 * x3
    base = (q22 + q33 + cross) % mod
    lin = (2 * (g[0, 1] * x2 + g[0, 2] * x3)) % mod
    target = c % mod
    for x1 in range(mod):
        vals = (g[0, 0] * x1 * x1 + lin * x1 + base) % mod
        hit = vals == target
        if primitive_only:
            prim = (x2 % q != 0) | (x3 % q != 0)
            if x1 % q != 0:
                prim = np.ones_like(hit)
            hit = hit & prim
        if hit.any():
            i, j = np.argwhere(hit)[0]
            return (x1, int(x2[i, j]), int(x3[i, j]))
    return None
