import pytest
from hypothesis import given, strategies as st

from qbrst.braid import antisymmetrizer_op
from qbrst.graded import (
    GradingMatrix,
    check_twisted_yang_baxter,
    parity_grading,
    super_permutation_sigma,
    transform_structure,
    twisted_antisymmetrizer,
    twisted_super_permutation,
    validate_grading,
    verify_grading,
)
from qbrst.multilinear import identity
from qbrst.qlie import ShapeError, bundled, validate_structure


def test_gl11_parity_grading():
    report = verify_grading(bundled("gl11"))
    assert report.all_passed, report.render()


def test_identity_grading_always_passes(algebra):
    d = GradingMatrix.identity(algebra.n)
    assert validate_grading(algebra, d).all_passed
    assert check_twisted_yang_baxter(algebra, d).all_passed
    assert twisted_antisymmetrizer(algebra, d, 2) == antisymmetrizer_op(algebra.sigma_rep(), 2)


def test_sl2_rejects_a_generic_diagonal():
    report = validate_grading(bundled("sl2"), GradingMatrix.diagonal([1, 2, 3]))
    assert not report.ok
    assert report.failures()[0].check_id == "grading_scales_c"


@given(st.lists(st.integers(1, 4), min_size=3, max_size=3))
def test_conjugation_keeps_the_constraints(diag):
    sc = bundled("sl2")
    assert validate_structure(transform_structure(sc, GradingMatrix.diagonal(diag))).all_passed


@given(st.lists(st.integers(0, 1), min_size=1, max_size=4))
def test_super_permutation_properties(parities):
    from qbrst.braid import Representation

    s = super_permutation_sigma(parities)
    n = len(parities)
    assert s @ s == identity(n, 2)
    assert Representation(s).braid_relation_holds()
    tw = twisted_super_permutation(parities)
    for i in range(n):
        for j in range(n):
            expected = -((-1) ** ((parities[j] + 1) * (parities[i] + 1)))
            assert tw.entry((i, j), (j, i)) == expected


def test_two_odd_generators_swap_with_a_sign():
    s = super_permutation_sigma([1, 1])
    assert s.entry((1, 0), (0, 1)) == -1
    assert super_permutation_sigma([0, 0, 0]) == bundled("sl2").sigma


def test_twisted_antisymmetrizer_vanishes_with_the_plain_one():
    sc = bundled("gl11")
    d = parity_grading(sc.parities)
    for n in (1, 2, 3):
        tw = twisted_antisymmetrizer(sc, d, n)
        assert tw.is_zero() == antisymmetrizer_op(sc.sigma_rep(), n).is_zero()
    assert twisted_antisymmetrizer(sc, d, 1) == identity(4, 1)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        validate_grading(bundled("sl2"), GradingMatrix.identity(2))
