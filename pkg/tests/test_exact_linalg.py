from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qbrst import exact_linalg as el
from qbrst.scalars import Laurent, q

small = st.integers(-3, 3)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda m: np.array(m, dtype=object)
    )


@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_inverse_or_singular(m):
    if el.det(m) == 0:
        with pytest.raises(el.SingularMatrix):
            el.inverse(m)
    else:
        inv = el.inverse(m)
        assert (m.dot(inv) == np.eye(len(m), dtype=object)).all()


@given(st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(lambda s: matrices(*s)))
def test_generalized_inverse_and_kernel(m):
    g = el.generalized_inverse(m)
    assert (m.dot(g).dot(m) == m).all()
    ker = el.kernel(m)
    assert len(ker) == m.shape[1] - el.rank(m)
    for v in ker:
        assert all(x == 0 for x in m.dot(np.array(v, dtype=object)))


def test_solve_and_no_solution():
    a = np.array([[1, 1], [1, 1]], dtype=object)
    x = el.solve(a, np.array([2, 2], dtype=object))
    assert list(a.dot(x)) == [2, 2]
    with pytest.raises(el.NoSolution):
        el.solve(a, np.array([1, 2], dtype=object))


def test_laurent_inverse():
    m = np.array([[q, 1], [0, q**-1]], dtype=object)
    inv = el.inverse(m)
    assert inv[0, 0] == q**-1 and inv[0, 1] == -1 and inv[1, 1] == q
    assert el.det(np.array([[1 + q, 0], [0, 1]], dtype=object)) == 1 + q


def test_rank_over_rationals():
    m = np.array([[Fraction(1, 2), 1], [1, 2]], dtype=object)
    assert el.rank(m) == 1
