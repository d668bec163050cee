"""Pure-Python twin of the compiled enumeration kernel.

Same contract as aupoly._speedups.fill_represented: mark every value
Q(nu + x) <= bound of the coset, where the caller passes the permuted Gram
entries, the shift numerators r (0 <= r_i < d), and the denominator d.
Values are stored in a caller-zeroed uint8 membership array.

The numpy path assumes the caller's overflow precheck passed (all
intermediates fit int64); fill_represented_bigint is the always-correct
arbitrary-precision variant.
"""

import math

import numpy as np

KERNEL_NAME = "python-numpy"


def _isqrt_vec(n):
    r = np.sqrt(n.astype(np.float64)).astype(np.int64)
    r = np.maximum(r, 0)
    for _ in range(2):
        r = np.where((r + 1) * (r + 1) <= n, r + 1, r)
        r = np.where(r * r > n, r - 1, r)
    return r


def fill_represented(g11, g12, g13, g22, g23, g33, r1, r2, r3, d, bound,
                     bits, budget=0):
    """Fill bits[v] = 1 for all represented v <= bound; returns visited count.

    A nonzero budget aborts once more than `budget` lattice points have been
    visited; the abort is signalled by returning -(visited) - 1.
    """
    s_total = bound * d * d
    m12 = g11 * g22 - g12 * g12
    dn = (g11 * (g22 * g33 - g23 * g23) - g12 * (g12 * g33 - g23 * g13)
          + g13 * (g12 * g23 - g22 * g13))
    b2_coef = g11 * g23 - g12 * g13
    d2 = d * d
    visited = 0

    t3 = math.isqrt(s_total * m12 // dn)
    z3 = -t3 + ((r3 + t3) % d)
    while z3 <= t3:
        disc2 = g11 * (s_total * m12 - dn * z3 * z3)
        if disc2 >= 0:
            s2 = math.isqrt(disc2)
            b2 = b2_coef * z3
            lo2 = -((b2 + s2) // m12)
            hi2 = (s2 - b2) // m12
            start2 = lo2 + ((r2 - lo2) % d)
            if start2 <= hi2:
                z2 = np.arange(start2, hi2 + 1, d, dtype=np.int64)
                b1 = g12 * z2 + g13 * z3
                c1 = g22 * z2 * z2 + (2 * g23 * z3) * z2 + g33 * z3 * z3
                disc1 = b1 * b1 - g11 * c1 + g11 * s_total
                keep = disc1 >= 0
                z2, b1, c1, disc1 = z2[keep], b1[keep], c1[keep], disc1[keep]
                if z2.size:
                    s1 = _isqrt_vec(disc1)
                    lo1 = -((b1 + s1) // g11)
                    hi1 = (s1 - b1) // g11
                    start1 = lo1 + ((r1 - lo1) % d)
                    count = (hi1 - start1) // d + 1
                    count = np.maximum(count, 0)
                    total = int(count.sum())
                    if total:
                        visited += total
                        if budget and visited > budget:
                            return -visited - 1
                        offsets = np.repeat(
                            np.cumsum(count) - count, count)
                        k = np.arange(total, dtype=np.int64) - offsets
                        z1 = np.repeat(start1, count) + d * k
                        b1f = np.repeat(b1, count)
                        c1f = np.repeat(c1, count)
                        f = g11 * z1 * z1 + 2 * b1f * z1 + c1f
                        vals = f // d2
                        bits[vals] = 1
        z3 += d
    return visited


def fill_represented_bigint(g11, g12, g13, g22, g23, g33, r1, r2, r3, d,
                            bound, bits, budget=0):
    """Arbitrary-precision variant (plain Python ints), same contract."""
    s_total = bound * d * d
    m12 = g11 * g22 - g12 * g12
    dn = (g11 * (g22 * g33 - g23 * g23) - g12 * (g12 * g33 - g23 * g13)
          + g13 * (g12 * g23 - g22 * g13))
    b2_coef = g11 * g23 - g12 * g13
    d2 = d * d
    twog11 = 2 * g11
    visited = 0

    t3 = math.isqrt(s_total * m12 // dn)
    z3 = -t3 + ((r3 + t3) % d)
    while z3 <= t3:
        disc2 = g11 * (s_total * m12 - dn * z3 * z3)
        if disc2 >= 0:
            s2 = math.isqrt(disc2)
            b2 = b2_coef * z3
            lo2 = -((b2 + s2) // m12)
            hi2 = (s2 - b2) // m12
            z2 = lo2 + ((r2 - lo2) % d)
            while z2 <= hi2:
                b1 = g12 * z2 + g13 * z3
                c1 = g22 * z2 * z2 + 2 * g23 * z2 * z3 + g33 * z3 * z3
                disc1 = b1 * b1 - g11 * c1 + g11 * s_total
                if disc1 >= 0:
                    s1 = math.isqrt(disc1)
                    lo1 = -((b1 + s1) // g11)
                    hi1 = (s1 - b1) // g11
                    z1 = lo1 + ((r1 - lo1) % d)
                    if z1 <= hi1:
                        n = (hi1 - z1) // d + 1
                        visited += n
                        if budget and visited > budget:
                            return -visited - 1
                        v = (g11 * z1 * z1 + 2 * b1 * z1 + c1) // d2
                        z1b = z1 + d
                        delta = ((g11 * z1b * z1b + 2 * b1 * z1b + c1) // d2) - v
                        step2 = twog11
                        for _ in range(n):
                            bits[v] = 1
                            v += delta
                            delta += step2
                z2 += d
        z3 += d
    return visited
