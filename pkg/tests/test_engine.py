import random



import pytest

from aupoly import engine, intmath, oracle
from aupoly.engine import (
    BRANCH_1,
    BRANCH_2A,
    BRANCH_2B,
    BRANCH_2D_FAILS,
    BRANCH_2D_HOLDS,
    analyze,
    decide,
    exception_family,
    local_scan,
    predict_exceptions,
    represents_coset,
)
from aupoly.lattice import GramMatrix3, ShiftVector, validate_instance

DIAG = GramMatrix3.diagonal
E1_7 = ShiftVector((1, 0, 0), 7)


def test_local_scan_examples():
    reports = local_scan(DIAG(25, 1, 1), 5)
    assert [r.prime for r in reports] == [2]
    assert not reports[0].universal

    reports = local_scan(DIAG(1, 1, 1), 7)
    assert [r.prime for r in reports] == [2]
    assert not reports[0].universal  # sum of three squares misses 7

    reports = local_scan(DIAG(2450, 791, 49), 7)
    assert [r.prime for r in reports] == [2, 5, 113]
    assert all(r.universal for r in reports)


def test_represents_coset_examples():
    inst = validate_instance(DIAG(98, 77, 539), E1_7, canonicalize=False)
    assert represents_coset(inst, 2) == (0, 0, 0)

    inst = validate_instance(DIAG(2450, 791, 49), E1_7)
    assert represents_coset(inst, 226) is None
    assert represents_coset(inst, inst.epsilon) == (0, 0, 0)


def test_decide_branches():
    cases = [
        (DIAG(9, 3, 3), ShiftVector((1, 0, 0), 3), "AlmostUniversal", BRANCH_1),
        (DIAG(49, 7, 14), E1_7, "AlmostUniversal", BRANCH_2A),
        (DIAG(98, 21, 49), E1_7, "AlmostUniversal", BRANCH_2B),
        (DIAG(98, 7, 49), E1_7, "AlmostUniversal", BRANCH_2D_HOLDS),
        (DIAG(2450, 791, 49), E1_7, "NotAlmostUniversal", BRANCH_2D_FAILS),
    ]
    for gram, shift, decision, branch in cases:
        v = analyze(gram, shift)
        assert (v.decision, v.branch) == (decision, branch), str(gram)


def test_trace_prefix_order():
    v = analyze(DIAG(98, 7, 49), E1_7)
    names = [t[0] for t in v.trace]
    assert names == ["local_scan", "(1) p mod 8", "(2a) ord_p(dN)",
                     "(2b) inert primes dividing rad(dN)",
                     "(2c) legendre(epsilon, p)",
                     "(2d) rad(dN)' represented by nu + N"]
    v = analyze(DIAG(49, 7, 14), E1_7)
    assert [t[0] for t in v.trace] == ["local_scan", "(1) p mod 8",
                                       "(2a) ord_p(dN)"]


def test_exception_family_spec_example():
    inst = validate_instance(DIAG(2450, 791, 49), E1_7)
    fam = exception_family(inst)
    assert (fam.t, fam.mu, fam.rho, fam.modulus) == (226, 4, 2, 7)
    assert fam.t * fam.mu % 7 == 1
    assert fam.rho**2 % 7 == inst.epsilon * fam.mu % 7
    primes = fam.predicted_primes(3)
    assert primes[0] == 23
    values = predict_exceptions(fam, 3)
    assert values[0] == 119554
    for q, v in zip(primes, values):
        assert intmath.is_prime(q) and q % 7 in (2, 5)
        assert intmath.legendre(-7, q) == 1
        assert v == q * q * 226
        assert v % 7 == inst.epsilon % 7


def test_predicted_exceptions_unrepresented():
    inst = validate_instance(DIAG(2450, 791, 49), E1_7)
    fam = exception_family(inst)
    rep = oracle.enumerate_coset(inst.as_coset(), 130000)
    for v in predict_exceptions(fam, 1):
        assert v <= 130000
        assert not rep.contains(v)


def test_local_failure_verdict():
    v = analyze(DIAG(98, 77, 539), E1_7)
    assert v.decision == "NotAlmostUniversal"
    assert v.branch == "local_failure(11)"
    assert any(r.prime == 11 and not r.universal for r in v.local_reports)


def test_short_circuit_verdict():
    v = analyze(DIAG(343, 7, 7), E1_7)
    assert v.decision == "NotAlmostUniversal"
    assert v.branch == "short_circuit"


def test_rejection_verdict():
    v = analyze(DIAG(25, 1, 1), ShiftVector((1, 0, 0), 5))
    assert v.decision == "HypothesisRejected"
    assert any(r.prime == 2 and not r.universal for r in v.local_reports)


def test_verdict_invariant_under_translation():
    rng = random.Random(31)
    base = analyze(DIAG(98, 7, 49), E1_7)
    for _ in range(5):
        x0 = tuple(rng.randrange(-3, 4) for _ in range(3))
        shift = E1_7.translated(x0)
        v = analyze(DIAG(98, 7, 49), shift)  # canonicalizes back to e1/7
        assert (v.decision, v.branch) == (base.decision, base.branch)


def unimodular_transforms(rng, count):
    mats = []
    for _ in range(count):
        u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(6):
            i, j = rng.sample(range(3), 2)
            c = rng.choice([-2, -1, 1, 2])
            for k in range(3):
                u[i][k] += c * u[j][k]
        mats.append(u)
    return mats


def test_verdict_invariant_under_basis_change():
    rng = random.Random(57)
    cases = [
        (DIAG(49, 7, 14), E1_7),
        (DIAG(2450, 791, 49), E1_7),
        (DIAG(9, 3, 3), ShiftVector((1, 0, 0), 3)),
    ]
    for gram, shift in cases:
        base = analyze(gram, shift)
        for u in unimodular_transforms(rng, 3):
            # new basis f_j = sum_i u[i][j] e_i; Gram' = U^T G U and the
            # shift coordinates transform by U^{-1}
            g = gram.rows
            gp = [[sum(u[a][i] * g[a][b] * 1 for a in range(3)) for b in range(3)]
                  for i in range(3)]
            gp = [[sum(gp[i][b] * u[b][j] for b in range(3)) for j in range(3)]
                  for i in range(3)]
            uinv = _inverse_unimodular(u)
            d = shift.denominator
            nums = [sum(uinv[i][k] * shift.numerators[k] for k in range(3))
                    for i in range(3)]
            v = analyze(GramMatrix3(gp), ShiftVector(nums, d))
            assert (v.decision, v.branch) == (base.decision, base.branch)


def _inverse_unimodular(u):
    det = (u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
           - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
           + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]))
    assert det in (1, -1)
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sub = [[u[a][b] for b in range(3) if b != j]
                   for a in range(3) if a != i]
            cof[j][i] = (-1) ** (i + j) * (sub[0][0] * sub[1][1]
                                           - sub[0][1] * sub[1][0])
    return [[cof[i][j] * det for j in range(3)] for i in range(3)]


@pytest.mark.xfail(
    strict=True,
    reason="documented limitation beyond the supported corpus: for the "
           "alpha = 2 instance diag(2401,343,98)+e1/49 (p = 7, conductor "
           "49) the branch classification is 2d-fails, but all predicted "
           "exceptional values 2*q^2 (q = 191, 877, 1171 split, = +-5 mod "
           "49) are represented -- witnesses (-5,-4,-9), (-24,-5,-39), "
           "(-33,-16,-21).  The exceptional-family construction is only "
           "sound at alpha = 1; see the project notes for the analysis")
def test_alpha_two_exception_family_is_unsound():
    inst = validate_instance(DIAG(2401, 343, 98), ShiftVector((1, 0, 0), 49))
    assert inst.alpha == 2
    v = decide(inst)
    assert v.branch == BRANCH_2D_FAILS
    rep = oracle.enumerate_coset(inst.as_coset(), 80000)
    for value in predict_exceptions(v.exception_family, 1):
        assert not rep.contains(value)


def test_anisotropy_consistency_when_locals_pass():
    # every instance passing the scan has anisotropic Q_p M
    from aupoly import jordan, padic
    from aupoly.lattice import superlattice
    for gram, shift in [(DIAG(49, 7, 14), E1_7), (DIAG(98, 21, 49), E1_7),
                        (DIAG(2450, 791, 49), E1_7), (DIAG(98, 7, 49), E1_7),
                        (DIAG(9, 3, 3), ShiftVector((1, 0, 0), 3))]:
        v = analyze(gram, shift)
        if not all(r.universal for r in v.local_reports):
            continue
        inst = v.instance
        split = jordan.jordan_split(superlattice(inst).gram_M, inst.p)
        coeffs = split.diagonal()
        assert padic.is_anisotropic(coeffs, inst.p), str(gram)
