# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel; exact int64 twin of aupoly._fallback.

The caller guarantees (via the exact overflow precheck) that every
intermediate fits comfortably in 64 bits.
"""

from libc.math cimport sqrt

KERNEL_NAME = "cython"

ctypedef long long i64


cdef inline i64 _isqrt(i64 n) nogil:
    if n <= 0:
        return 0
    cdef i64 r = <i64>sqrt(<double>n)
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline i64 _floordiv(i64 a, i64 b) nogil:
    # C division truncates toward zero; emulate Python floor division (b > 0)
    cdef i64 q = a / b
    if a % b != 0 and (a < 0) != (b < 0):
        q -= 1
    return q


cdef inline i64 _mod(i64 a, i64 b) nogil:
    cdef i64 r = a % b
    if r < 0:
        r += b
    return r


def fill_represented(i64 g11, i64 g12, i64 g13, i64 g22, i64 g23, i64 g33,
                     i64 r1, i64 r2, i64 r3, i64 d, i64 bound,
                     unsigned char[::1] bits, i64 budget=0):
    """Fill bits[v] = 1 for all represented v <= bound; returns visited count.

    A nonzero budget aborts once more than `budget` lattice points have been
    visited; the abort is signalled by returning -(visited) - 1.
    """
    cdef i64 s_total = bound * d * d
    cdef i64 m12 = g11 * g22 - g12 * g12
    cdef i64 dn = (g11 * (g22 * g33 - g23 * g23)
                   - g12 * (g12 * g33 - g23 * g13)
                   + g13 * (g12 * g23 - g22 * g13))
    cdef i64 b2_coef = g11 * g23 - g12 * g13
    cdef i64 d2 = d * d
    cdef i64 twog11 = 2 * g11
    cdef i64 visited = 0

    cdef i64 t3, z3, disc2, s2, b2, lo2, hi2, z2
    cdef i64 b1, c1, disc1, s1, lo1, hi1, z1, n, v, delta, k

    t3 = _isqrt(s_total * m12 // dn)
    z3 = -t3 + _mod(r3 + t3, d)
    while z3 <= t3:
        disc2 = g11 * (s_total * m12 - dn * z3 * z3)
        if disc2 >= 0:
            s2 = _isqrt(disc2)
            b2 = b2_coef * z3
            lo2 = -_floordiv(b2 + s2, m12)
            hi2 = _floordiv(s2 - b2, m12)
            z2 = lo2 + _mod(r2 - lo2, d)
            while z2 <= hi2:
                b1 = g12 * z2 + g13 * z3
                c1 = g22 * z2 * z2 + 2 * g23 * z2 * z3 + g33 * z3 * z3
                disc1 = b1 * b1 - g11 * c1 + g11 * s_total
                if disc1 >= 0:
                    s1 = _isqrt(disc1)
                    lo1 = -_floordiv(b1 + s1, g11)
                    hi1 = _floordiv(s1 - b1, g11)
                    z1 = lo1 + _mod(r1 - lo1, d)
                    if z1 <= hi1:
                        n = (hi1 - z1) // d + 1
                        visited += n
                        if budget and visited > budget:
                            return -visited - 1
                        v = (g11 * z1 * z1 + 2 * b1 * z1 + c1) // d2
                        delta = ((g11 * (z1 + d) * (z1 + d)
                                  + 2 * b1 * (z1 + d) + c1) // d2) - v
                        for k in range(n):
                            bits[v] = 1
                            v += delta
                            delta += twog11
                z2 += d
        z3 += d
    return visited
