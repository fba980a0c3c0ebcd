"""Pure-Python (numpy) versions of the compiled kernels.

int64 inputs use numpy's integer matmul only when an a-priori bound
rules out overflow; otherwise the work is redone on Python integers.
Below 2**53 the same bound makes every partial sum an integer that a
double holds exactly, so BLAS float64 matmul is used there.
"""

from __future__ import annotations

import numpy as np

_LIMIT = 2**62
_DOUBLE = 2**53


def _bound(a: np.ndarray, b: np.ndarray, inner: int) -> int:
    if a.size == 0 or b.size == 0:
        return 0
    return int(np.abs(a).max()) * int(np.abs(b).max()) * max(inner, 1)


def _int_matmul(a: np.ndarray, b: np.ndarray, what: str) -> np.ndarray:
    bound = _bound(a, b, a.shape[-1])
    if bound < _DOUBLE:
        return np.matmul(a.astype(np.float64), b.astype(np.float64)).astype(np.int64)
    if bound < _LIMIT:
        return np.matmul(a, b)
    raise OverflowError(f"int64 bound exceeded in {what}")


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == np.int64 and b.dtype == np.int64:
        return _int_matmul(a, b, "matmul")
    return np.matmul(a.astype(object), b.astype(object))


def apply_local(op: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """out[p, o, r] = sum_i op[o, i] * mat[p, i, r]."""
    if op.dtype == np.int64 and mat.dtype == np.int64:
        return _int_matmul(op, mat, "apply_local")
    return np.matmul(op.astype(object), mat.astype(object))
