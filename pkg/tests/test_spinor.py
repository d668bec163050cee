import random

import pytest

from aupoly import intmath, spinor
from aupoly.errors import ShapeViolation
from aupoly.lattice import GramMatrix3, ShiftVector, superlattice, validate_instance
from aupoly.spinor import (
    SpinorField,
    norm_group_contains,
    spinor_exception_obstruction,
    splits,
    theta_Mp,
    theta_from_instance,
)

DIAG = GramMatrix3.diagonal
E1_7 = ShiftVector((1, 0, 0), 7)


def test_field_validation():
    SpinorField(7)
    SpinorField(23)
    with pytest.raises(ShapeViolation):
        SpinorField(5)
    with pytest.raises(ShapeViolation):
        SpinorField(9)


def test_splits():
    f = SpinorField(7)
    assert splits(2, f) == "split"
    assert splits(7, f) == "ramified"
    assert splits(3, f) == "inert"     # -7 = 2 mod 3, nonsquare
    assert splits(11, f) == "split"    # -7 = 4 mod 11
    assert splits(113, f) == "split"
    assert splits(5, f) == "inert"


def test_norm_group_membership():
    f = SpinorField(7)
    for q in (2, 3, 5, 7, 11):
        assert norm_group_contains(q, f, 1)
    assert norm_group_contains(7, f, 7)       # ramified: {1, p} classes
    assert not norm_group_contains(7, f, 3)   # 3 nonsquare mod 7
    assert not norm_group_contains(3, f, 3)   # inert, odd valuation
    assert norm_group_contains(3, f, 9)
    assert norm_group_contains(2, f, 14)      # split: everything


def test_norm_group_square_class_invariance():
    rng = random.Random(6)
    f = SpinorField(23)
    for _ in range(100):
        q = rng.choice([2, 3, 5, 7, 23, 29])
        s = rng.choice([-1, 1]) * rng.randrange(1, 300)
        w = rng.randrange(1, 20)
        assert norm_group_contains(q, f, s) == norm_group_contains(q, f, s * w * w)


def test_theta_examples():
    # epsilon square, i even shape (paper display collapses to {1, p})
    g = theta_Mp(1, 1, 1, 1, 1, 7)
    reps = {c.representative for c in g.classes}
    assert reps == {1, 7}

    # epsilon nonsquare: {1, epsilon*p} with epsilon*p escaping {1, p}
    g = theta_Mp(3, 1, 1, 3, 1, 7)
    reps = {c.representative for c in g.classes}
    assert 21 in reps or 7 * 3 in reps

    with pytest.raises(ShapeViolation):
        theta_Mp(1, 1, 0, 1, 2, 7)
    with pytest.raises(ShapeViolation):
        theta_Mp(7, 1, 1, 1, 1, 7)


def test_theta_group_structure():
    rng = random.Random(12)
    for _ in range(50):
        p = rng.choice([7, 23, 31])
        units = [rng.randrange(1, p) for _ in range(3)]
        i = rng.randrange(1, 4)
        j = rng.randrange(i, 5)
        g = theta_Mp(units[0], units[1], i, units[2], j, p)
        assert g.contains(1)
        for a in g.classes:
            for b in g.classes:
                assert a * b in g.classes


def test_theta_from_corpus_instance():
    inst = validate_instance(DIAG(2450, 791, 49), E1_7)
    g = theta_from_instance(inst)
    reps = {c.representative for c in g.classes}
    assert reps == {1, 7}
    assert g.contained_in_norm_group(SpinorField(7))


def test_obstruction_examples():
    # ord_p(dN) even -> (a)
    inst = validate_instance(DIAG(49, 7, 14), E1_7)
    assert spinor_exception_obstruction(inst, 2) == "a"

    # inert prime dividing rad(dN) -> (b)
    inst = validate_instance(DIAG(98, 21, 49), E1_7)
    assert spinor_exception_obstruction(inst, 6) == "b"

    # all containments vanish -> possible
    inst = validate_instance(DIAG(2450, 791, 49), E1_7)
    assert spinor_exception_obstruction(inst, 226) == "possible"

    with pytest.raises(ValueError):
        spinor_exception_obstruction(inst, 7 * 226)


def test_obstruction_c_branch():
    # epsilon nonsquare mod p with (a), (b) failing forces (c); build a
    # synthetic instance (the diagonal sweep rarely produces one)
    inst = validate_instance(DIAG(2450, 791, 49), E1_7)
    tweaked = type(inst)(inst.gram, inst.shift, inst.p, inst.alpha,
                         epsilon=3, scale_applied=0)
    assert spinor_exception_obstruction(tweaked, 226) == "c"


def test_field_from_exception_data():
    # -t * dM lies in -p * (squares) for the 2d-fails corpus instance
    inst = validate_instance(DIAG(2450, 791, 49), E1_7)
    sup = superlattice(inst)
    t = intmath.radical_nonp(inst.dN, inst.p)
    val = t * sup.dM
    assert intmath.radical(val) == inst.p
