"""Exact brute-force ground truth: enumerate all values of Q on the coset
nu + N up to a bound, report the represented set, its gaps in the
progression epsilon + step*N, and stabilization statistics.

The enumeration is exhaustive ellipsoid enumeration with exact integer
coordinate bounds; no sampling, no floating point in any decision.
"""

import hashlib
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BudgetExceeded

# dense membership array ceiling; beyond this we error rather than degrade
MAX_BOUND = 10**8
INT64_SAFE = 2**61


def _permuted_inputs(coset):
    """Permute coordinates so the largest diagonal entry is enumerated
    outermost (the kernel's z3 slot); returns d, permuted entries and shift.
    """
    g = coset.gram.rows
    order = sorted(range(3), key=lambda i: (g[i][i], i))  # inner .. outer
    gp = [[g[order[i]][order[j]] for j in range(3)] for i in range(3)]
    d = coset.shift.denominator
    r = [coset.shift.numerators[order[i]] % d for i in range(3)]
    return d, gp, r, order


def _cofactors(g):
    m11 = g[1][1] * g[2][2] - g[1][2] ** 2
    m22 = g[0][0] * g[2][2] - g[0][2] ** 2
    m33 = g[0][0] * g[1][1] - g[0][1] ** 2
    return m11, m22, m33


def _int64_safe(gp, d, bound):
    """Exact precheck that every kernel intermediate stays below 2^61."""
    s = bound * d * d
    dn = (gp[0][0] * (gp[1][1] * gp[2][2] - gp[1][2] ** 2)
          - gp[0][1] * (gp[0][1] * gp[2][2] - gp[1][2] * gp[0][2])
          + gp[0][2] * (gp[0][1] * gp[1][2] - gp[1][1] * gp[0][2]))
    m11, m22, m33 = _cofactors(gp)
    gmax = max(abs(v) for row in gp for v in row)
    maxz = max(math.isqrt(s * m // dn) for m in (m11, m22, m33)) + d + 1
    checks = (
        s * m33,
        gp[0][0] * s * m33,
        dn * maxz * maxz,
        16 * gmax * gmax * maxz * maxz,
        4 * gmax * gmax * maxz + 2**31,
        gp[0][0] * s,
    )
    return all(c < INT64_SAFE for c in checks)


@dataclass(frozen=True)
class RepresentedSet:
    """Membership array over [0, bound] for the values of Q on nu + N."""

    coset: object
    bound: int
    bits: np.ndarray = field(compare=False)
    visited: int
    elapsed: float
    kernel: str
    authoritative: bool = True
    fingerprint: str = ""

    def contains(self, v):
        return 0 <= v <= self.bound and bool(self.bits[v])

    def represented_values(self):
        return np.flatnonzero(self.bits)

    def progression_targets(self):
        """All targets epsilon + step*n within the bound, as (n, value)."""
        eps, step = self.coset.epsilon, self.coset.step
        if eps > self.bound:
            return []
        count = (self.bound - eps) // step + 1
        return [(n, eps + step * n) for n in range(count)]


def _fingerprint(coset, bound):
    text = f"{coset.gram}|{coset.shift}|{bound}"
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def enumerate_coset(coset, bound, budget=None, kernel=None):
    """Complete represented set of the coset up to `bound`.

    Raises BudgetExceeded (carrying the partial, non-authoritative set) when
    more than `budget` lattice points would be visited.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if bound > MAX_BOUND:
        raise ValueError(f"bound {bound} exceeds the dense-array ceiling {MAX_BOUND}")
    d, gp, r, _ = _permuted_inputs(coset)
    bits = np.zeros(bound + 1, dtype=np.uint8)
    six = (gp[0][0], gp[0][1], gp[0][2], gp[1][1], gp[1][2], gp[2][2])
    args = six + (r[0], r[1], r[2], d, bound, bits, budget or 0)
    start = time.monotonic()
    if kernel is None:
        fill = (kernels.fill_represented if _int64_safe(gp, d, bound)
                else kernels.fill_represented_bigint)
    else:
        fill = kernel
    visited = fill(*args)
    elapsed = time.monotonic() - start
    if visited < 0:
        partial = RepresentedSet(coset, bound, bits, -visited - 1, elapsed,
                                 getattr(fill, "__module__", "?"),
                                 authoritative=False,
                                 fingerprint=_fingerprint(coset, bound))
        raise BudgetExceeded(f"visited more than {budget} lattice points",
                             partial=partial)
    return RepresentedSet(coset, bound, bits, visited, elapsed,
                          kernels.KERNEL_NAME if kernel is None else
                          getattr(fill, "__module__", "?"),
                          fingerprint=_fingerprint(coset, bound))


def gaps(rep_set):
    """Ascending n with epsilon + step*n unrepresented, up to the bound."""
    if not rep_set.authoritative:
        raise BudgetExceeded("gap lists need an authoritative represented set",
                             partial=rep_set)
    eps, step = rep_set.coset.epsilon, rep_set.coset.step
    if eps > rep_set.bound:
        return []
    targets = np.arange(eps, rep_set.bound + 1, step, dtype=np.int64)
    missing = targets[rep_set.bits[targets] == 0]
    return [int((v - eps) // step) for v in missing]


def stabilization(rep_set, window=0.5):
    """"stable" iff no gaps fall in [(1 - window) * bound, bound]."""
    if not 0 < window < 1:
        raise ValueError("window fraction must be in (0, 1)")
    eps, step = rep_set.coset.epsilon, rep_set.coset.step
    cutoff = (1 - window) * rep_set.bound
    for n in gaps(rep_set):
        if eps + step * n >= cutoff:
            return "unstable"
    return "stable"


def coset_witness(coset, t):
    """Exact decision: some x in N with Q(nu + x) = t?  Returns the witness
    integer triple or None.

    Runs the same layered bounds as the enumerator but solves the innermost
    quadratic exactly instead of sweeping it; arbitrary precision throughout.
    """
    if t < 0:
        return None
    d, gp, r, order = _permuted_inputs(coset)
    g11, g12, g13 = gp[0][0], gp[0][1], gp[0][2]
    g22, g23, g33 = gp[1][1], gp[1][2], gp[2][2]
    s_total = t * d * d
    m12 = g11 * g22 - g12 * g12
    dn = (g11 * (g22 * g33 - g23 * g23) - g12 * (g12 * g33 - g23 * g13)
          + g13 * (g12 * g23 - g22 * g13))
    b2_coef = g11 * g23 - g12 * g13

    t3 = math.isqrt(s_total * m12 // dn)
    z3 = -t3 + ((r[2] + t3) % d)
    while z3 <= t3:
        disc2 = g11 * (s_total * m12 - dn * z3 * z3)
        if disc2 >= 0:
            s2 = math.isqrt(disc2)
            b2 = b2_coef * z3
            lo2 = -((b2 + s2) // m12)
            hi2 = (s2 - b2) // m12
            z2 = lo2 + ((r[1] - lo2) % d)
            while z2 <= hi2:
                b1 = g12 * z2 + g13 * z3
                c1 = g22 * z2 * z2 + 2 * g23 * z2 * z3 + g33 * z3 * z3
                disc1 = b1 * b1 - g11 * (c1 - s_total)
                if disc1 >= 0:
                    s1 = math.isqrt(disc1)
                    if s1 * s1 == disc1:
                        for root in ((-b1 - s1), (-b1 + s1)):
                            if root % g11 == 0:
                                z1 = root // g11
                                if (z1 - r[0]) % d == 0:
                                    z = (z1, z2, z3)
                                    x = [0, 0, 0]
                                    for pos, coord in enumerate(order):
                                        x[coord] = (z[pos] - coset.shift
                                                    .numerators[coord]) // d
                                    assert coset.value_at(x) == t
                                    return tuple(x)
                z2 += d
        z3 += d
    return None
