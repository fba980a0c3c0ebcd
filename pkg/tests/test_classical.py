from itertools import product

import pytest

from ce_oracle import ce_boundary, expand, reversed_boundary
from qbrst.brst import GhostEngine, GhostPolynomial, build_brst_recursive
from qbrst.qlie import bundled


def oracle_polynomial(bracket, word, wedge, n, fn=reversed_boundary):
    terms = {}
    for (w, v), c in fn(bracket, word, wedge).items():
        vec = expand(v, n)
        key = (w, len(v))
        prev = terms.get(key, [0] * len(vec))
        terms[key] = [a + c * b for a, b in zip(prev, vec)]
    return GhostPolynomial(n, terms)


@pytest.fixture(scope="module")
def sl2_setup():
    sc = bundled("sl2")
    bracket = {}
    for (i, j), (k,), v in sc.c.nonzero_entries():
        bracket.setdefault((i, j), {})[k] = v
    return sc, bracket, GhostEngine(sc, build_brst_recursive(sc))


def test_oracle_bracket_is_the_sl2_bracket(sl2_setup):
    _, bracket, _ = sl2_setup
    h, e, f = 0, 1, 2
    assert bracket[(e, f)] == {h: 1}
    assert bracket[(h, e)] == {e: 2}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_q_is_the_chevalley_eilenberg_boundary(sl2_setup, n):
    sc, bracket, eng = sl2_setup
    for word in [()] + [(i,) for i in range(3)]:
        for wedge in product(range(3), repeat=n):
            got = eng.apply(GhostPolynomial.monomial(eng, word, wedge))
            assert got == oracle_polynomial(bracket, word, wedge, 3), (word, wedge)


def test_oracle_ordering_matters(sl2_setup):
    sc, bracket, eng = sl2_setup
    wedge = (1, 2)
    got = eng.apply(GhostPolynomial.monomial(eng, (), wedge))
    assert got != oracle_polynomial(bracket, (), wedge, 3, fn=ce_boundary)
