import pytest
from hypothesis import given, strategies as st

from qbrst.ideal import DegreeCapExceeded, mul_words, reduce_mod_ideal, relator
from qbrst.qlie import bundled
from qbrst.scalars import q

E, F, H = 1, 2, 0  # sl2 generator order h, e, f


def test_relator_is_a_member_with_unit_witness(algebra):
    g = relator(algebra, 0, 0) or relator(algebra, 0, algebra.n - 1)
    w = reduce_mod_ideal(algebra, g)
    assert w.member and w.check(algebra)


def test_classical_commutator_in_sl2():
    sc = bundled("sl2")
    elem = {(E, F): 1, (F, E): -1}
    w0 = reduce_mod_ideal(sc, elem)
    assert not w0.member
    # adding the bracket term makes it a member
    for k, v in w0.residual.items():
        elem[k] = elem.get(k, 0) - v
    w = reduce_mod_ideal(sc, elem)
    assert w.member and w.check(sc)
    assert list(elem) != [] and all(len(k) <= 2 for k in elem)


def test_single_generator_is_not_a_member(algebra):
    w = reduce_mod_ideal(algebra, {(0,): 1})
    assert not w.member and w.residual == {(0,): 1}


def test_degree_cap():
    sc = bundled("sl2")
    with pytest.raises(DegreeCapExceeded):
        reduce_mod_ideal(sc, {(0, 0, 0): 1}, cap=2)


def test_laurent_membership():
    sc = bundled("hecke2")
    g = relator(sc, 0, 1)
    assert any(not isinstance(v, int) for v in g.values())
    w = reduce_mod_ideal(sc, mul_words((1,), g), cap=3)
    assert w.member and w.check(sc)


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3),
       st.lists(st.integers(0, 2), max_size=1), st.integers(-3, 3).filter(bool))
def test_two_sided_multiples_are_members(pairs, left, c):
    sc = bundled("sl2")
    elem = {}
    for i, j in pairs:
        for w, v in mul_words(tuple(left), relator(sc, i, j)).items():
            elem[w] = elem.get(w, 0) + c * v
    elem = {k: v for k, v in elem.items() if v}
    w = reduce_mod_ideal(sc, elem, cap=3)
    assert w.member and w.check(sc)
