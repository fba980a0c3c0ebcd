import numpy as np
import pytest
from hypothesis import given, strategies as st

from qbrst import _kernels
from qbrst.multilinear import (
    AUX,
    VECTOR,
    ArityMismatch,
    LinOp,
    OutOfRange,
    PatternMismatch,
    apply_at,
    compose,
    embed_at,
    first_difference,
    identity,
    kron,
    project_block,
    ravel,
    unravel,
)
from qbrst.scalars import q


def ops(dim, out_legs, in_legs):
    size = dim**out_legs * dim**in_legs
    return st.lists(st.integers(-3, 3), min_size=size, max_size=size).map(
        lambda xs: LinOp(dim, out_legs, in_legs, np.array(xs, dtype=np.int64))
    )


@given(ops(2, 1, 2), ops(2, 2, 2), ops(2, 2, 1))
def test_compose_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@given(ops(2, 1, 1), ops(2, 1, 1))
def test_embeddings_on_disjoint_legs_commute(a, b):
    x, y = embed_at(a, 1, 3), embed_at(b, 3, 3)
    assert x @ y == y @ x
    assert x @ y == kron(kron(a, identity(2, 1)), b)


@given(ops(2, 2, 2), ops(2, 3, 3))
def test_apply_at_matches_embedding(op, target):
    for k in (1, 2):
        assert apply_at(op, k, target) == embed_at(op, k, 3) @ target


@given(ops(3, 1, 1), ops(3, 1, 1))
def test_backends_agree(a, b):
    big_a, big_b = kron(a, a).data, kron(b, b).data
    r = _kernels.matmul(big_a, big_b, backend="python")
    if _kernels.HAVE_COMPILED:
        assert np.array_equal(r, _kernels.matmul(big_a, big_b, backend="compiled"))
    assert np.array_equal(r, big_a @ big_b)


@pytest.mark.parametrize("scale", [2**20, 2**24, 2**29])
def test_python_kernel_regimes_are_exact(scale):
    # 2**20 goes through doubles, 2**24 sits just under 2**53 and 2**29 through int64
    rng = np.random.default_rng(scale)
    a = rng.integers(-scale, scale, size=(6, 7), dtype=np.int64)
    b = rng.integers(-scale, scale, size=(7, 5), dtype=np.int64)
    a[0, 0], b[0, 0] = scale - 1, scale - 1
    exact = a.astype(object) @ b.astype(object)
    assert (_kernels.matmul(a, b, backend="python") == exact).all()
    out = _kernels.apply_local(a, b[None, :, :], backend="python")
    assert (out[0] == exact).all()


def test_overflow_promotes_to_python_integers():
    a = LinOp(1, 1, 1, np.array([[2**40]], dtype=np.int64))
    prod = (a @ a).data
    assert prod.dtype == object and prod[0, 0] == 2**80


def test_laurent_entries_compose_exactly():
    a = LinOp(2, 1, 1, np.array([[q, 1], [0, q**-1]], dtype=object))
    b = a @ a
    assert b.entry((0,), (0,)) == q**2
    assert b.entry((0,), (1,)) == q + q**-1


def test_arity_and_range_errors():
    with pytest.raises(ArityMismatch):
        compose(identity(2, 1), identity(2, 2))
    with pytest.raises(OutOfRange):
        embed_at(identity(2, 2), 2, 2)
    with pytest.raises(PatternMismatch):
        project_block(identity(3, 1), (VECTOR, VECTOR), (VECTOR,))


def test_project_block_drops_aux_legs():
    data = np.arange(9, dtype=np.int64).reshape(3, 3)
    op = LinOp(3, 1, 1, data)
    assert project_block(op, (VECTOR,), (VECTOR,)).data.tolist() == [[4, 5], [7, 8]]
    assert project_block(op, (VECTOR,), (AUX,)).data.tolist() == [[3], [6]]


def test_first_difference_reports_indices():
    a = identity(2, 2)
    b = LinOp(2, 2, 2, a.data.copy())
    assert first_difference(a, b) is None
    data = a.data.copy()
    data[ravel((1, 0), 2), ravel((1, 0), 2)] = 5
    d = first_difference(a, LinOp(2, 2, 2, data))
    assert d is not None and d.as_dict()["out_index"] == [1, 0]


@given(st.integers(1, 4), st.integers(0, 4))
def test_ravel_round_trip(dim, legs):
    for i in range(dim**legs):
        assert ravel(unravel(i, dim, legs), dim) == i
