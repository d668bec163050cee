import random

import numpy as np
import pytest

from aupoly import intmath, jordan
from aupoly.errors import PrecisionTooLow
from aupoly.jordan import jordan_split, split_blocks_matrix
from aupoly.lattice import GramMatrix3

DIAG = GramMatrix3.diagonal


def random_posdef(rng, scale=4):
    while True:
        l = [[rng.randrange(-scale, scale + 1) for _ in range(3)] for _ in range(3)]
        g = [[sum(l[k][i] * l[k][j] for k in range(3)) for j in range(3)]
             for i in range(3)]
        det = (g[0][0] * (g[1][1] * g[2][2] - g[1][2] ** 2)
               - g[0][1] * (g[0][1] * g[2][2] - g[1][2] * g[0][2])
               + g[0][2] * (g[0][1] * g[1][2] - g[1][1] * g[0][2]))
        if det > 0:
            return GramMatrix3(g)


def verify_certificate(gram, split, q):
    """T^T G T = blocks mod q^K with det(T) a q-adic unit."""
    mod = q**split.precision
    t = split.transform
    g = gram.rows
    n = 3
    tgt = [[sum(t[k][i] * g[k][l] for k in range(n)) % mod for l in range(n)]
           for i in range(n)]
    tgt = [[sum(tgt[i][k] * t[k][j] for k in range(n)) % mod for j in range(n)]
           for i in range(n)]
    blocks = split_blocks_matrix(split)
    for i in range(n):
        for j in range(n):
            assert (tgt[i][j] - blocks[i][j]) % mod == 0, (i, j)
    det_t = (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1])
             - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
             + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]))
    assert det_t % q != 0


def residue_image(matrix, q, k):
    """Set of values of the form on (Z/q^k)^3 (numpy sweep)."""
    mod = q**k
    m = np.array(matrix, dtype=np.int64)
    r = np.arange(mod, dtype=np.int64)
    x2, x3 = np.meshgrid(r, r, indexing="ij")
    tail = (m[1, 1] * x2 * x2 + m[2, 2] * x3 * x3 + 2 * m[1, 2] * x2 * x3) % mod
    lin = (2 * (m[0, 1] * x2 + m[0, 2] * x3)) % mod
    out = np.zeros(mod, dtype=bool)
    for x1 in range(mod):
        vals = (m[0, 0] * x1 * x1 + lin * x1 + tail) % mod
        out[vals] = True
    return frozenset(np.flatnonzero(out).tolist())


def test_spec_examples():
    s = jordan_split(DIAG(49, 7, 14), 7)
    assert s.exponents() == (1, 1, 2)
    assert s.unit_block_units() == (1, 2, 1)

    s = jordan_split(DIAG(1, 1, 1), 5)
    assert s.exponents() == (0, 0, 0)

    s = jordan_split(GramMatrix3([[2, 1, 0], [1, 2, 0], [0, 0, 7]]), 7)
    assert s.exponents() == (0, 0, 1)
    u1, u2, _ = (c.units[0] for c in s.components)
    # unimodular part has determinant class 3 * (square)
    assert intmath.legendre(u1 * u2, 7) == intmath.legendre(3, 7)


def test_precision_too_low():
    with pytest.raises(PrecisionTooLow):
        jordan_split(DIAG(49, 7, 14), 7, precision=3)


def test_certificates_random_odd():
    rng = random.Random(13)
    for q in (3, 5, 7):
        for _ in range(40):
            gram = random_posdef(rng)
            s = jordan_split(gram, q)
            verify_certificate(gram, s, q)


def test_certificates_random_two():
    rng = random.Random(29)
    for _ in range(60):
        gram = random_posdef(rng)
        s = jordan_split(gram, 2)
        verify_certificate(gram, s, 2)


def test_improper_blocks_at_two():
    # A(0,0)-type: hyperbolic plane plus a unit
    g = GramMatrix3([[2, 1, 0], [1, 2, 0], [0, 0, 1]])
    s = jordan_split(g, 2)
    kinds = sorted(c.kind for c in s.components)
    assert kinds == ["A22", "unit"]

    g = GramMatrix3([[4, 1, 0], [1, 4, 0], [0, 0, 3]])
    s = jordan_split(g, 2)
    kinds = sorted(c.kind for c in s.components)
    assert kinds == ["A00", "unit"]


def test_residue_sets_match_small():
    rng = random.Random(101)
    for q in (3, 5):
        for _ in range(12):
            gram = random_posdef(rng, scale=3)
            k = intmath.valuation(gram.det, q) + 3
            if q**k > 200:
                continue
            s = jordan_split(gram, q, precision=k)
            verify_certificate(gram, s, q)
            img_orig = residue_image(gram.rows, q, k)
            img_split = residue_image(split_blocks_matrix(s), q, k)
            assert img_orig == img_split
