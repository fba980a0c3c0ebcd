"""Dense exact operators between tensor powers of a base space.

A :class:`LinOp` with base dimension ``d``, ``out_legs`` n and ``in_legs`` m
is a linear map ``V^{(x)m} -> V^{(x)n}`` stored as a ``d**n x d**m``
matrix acting on column vectors.  Multi-indices are flattened row-major
with the first leg most significant.

Storage is ``int64`` when every entry is an integer that fits, and a numpy
object array of exact scalars otherwise.  Products go through the kernel
backend in :mod:`qbrst._kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .scalars import Laurent, normalize

__all__ = [
    "MultilinearError",
    "ArityMismatch",
    "DimMismatch",
    "OutOfRange",
    "PatternMismatch",
    "LinOp",
    "Projector",
    "Difference",
    "as_exact_array",
    "identity",
    "compose",
    "kron",
    "embed_at",
    "apply_at",
    "project_block",
    "first_difference",
    "unravel",
    "ravel",
]

VECTOR, AUX, FULL = "vector", "aux", "full"
_INT64_MAX = 2**63 - 1


class MultilinearError(ValueError):
    pass


class ArityMismatch(MultilinearError):
    pass


class DimMismatch(MultilinearError):
    pass


class OutOfRange(MultilinearError):
    pass


class PatternMismatch(MultilinearError):
    pass


def as_exact_array(data) -> np.ndarray:
    """2-d array of exact scalars, compacted to int64 when possible."""
    arr = np.asarray(data)
    if arr.dtype == np.int64:
        return arr
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64)
    if arr.dtype.kind == "f":
        raise TypeError("floating point data is not allowed")
    arr = np.asarray(data, dtype=object)
    flat = arr.ravel()
    all_int = True
    for i, x in enumerate(flat):
        if isinstance(x, (bool, np.integer)):
            x = int(x)
            flat[i] = x
        if isinstance(x, int):
            if not -_INT64_MAX <= x <= _INT64_MAX:
                all_int = False
            continue
        if isinstance(x, Fraction):
            if x.denominator == 1:
                flat[i] = x = x.numerator
                if -_INT64_MAX <= x <= _INT64_MAX:
                    continue
            all_int = False
            continue
        if isinstance(x, Laurent):
            all_int = False
            continue
        if isinstance(x, (float, complex, np.floating)):
            raise TypeError("floating point data is not allowed")
        flat[i] = normalize(x)
        if not isinstance(flat[i], int):
            all_int = False
    if all_int:
        return arr.astype(np.int64)
    return arr


def unravel(index: int, dim: int, legs: int) -> Tuple[int, ...]:
    out = []
    for _ in range(legs):
        index, r = divmod(index, dim)
        out.append(r)
    return tuple(reversed(out))


def ravel(multi: Sequence[int], dim: int) -> int:
    out = 0
    for x in multi:
        out = out * dim + x
    return out


class LinOp:
    """Exact linear map between tensor powers (immutable)."""

    __slots__ = ("dim", "out_legs", "in_legs", "data")

    def __init__(self, dim: int, out_legs: int, in_legs: int, data):
        if dim < 1:
            raise DimMismatch("base dimension must be positive")
        arr = as_exact_array(data)
        shape = (dim**out_legs, dim**in_legs)
        if arr.shape != shape:
            if arr.size == shape[0] * shape[1]:
                arr = arr.reshape(shape)
            else:
                raise DimMismatch(f"expected {shape[0] * shape[1]} components, got {arr.size}")
        arr.flags.writeable = False
        self.dim = dim
        self.out_legs = out_legs
        self.in_legs = in_legs
        self.data = arr

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, dim: int, out_legs: int, in_legs: int) -> "LinOp":
        return cls(dim, out_legs, in_legs, np.zeros((dim**out_legs, dim**in_legs), dtype=np.int64))

    @classmethod
    def from_entries(cls, dim, out_legs, in_legs, entries: Iterable) -> "LinOp":
        """Build from ``(out multi-index, in multi-index, value)`` triples."""
        arr = np.zeros((dim**out_legs, dim**in_legs), dtype=object)
        arr[:] = 0
        for out_idx, in_idx, v in entries:
            arr[ravel(out_idx, dim), ravel(in_idx, dim)] += v
        return cls(dim, out_legs, in_legs, arr)

    # -- inspection -------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    def entry(self, out_idx: Sequence[int], in_idx: Sequence[int]):
        return normalize(_py(self.data[ravel(out_idx, self.dim), ravel(in_idx, self.dim)]))

    def is_zero(self) -> bool:
        if self.data.dtype == np.int64:
            return not self.data.any()
        return all(not x for x in self.data.flat)

    def nonzero_entries(self):
        rows, cols = np.nonzero(self.data != 0) if self.data.dtype == np.int64 else _obj_nonzero(self.data)
        for r, c in zip(rows, cols):
            yield (unravel(int(r), self.dim, self.out_legs),
                   unravel(int(c), self.dim, self.in_legs),
                   _py(self.data[r, c]))

    def is_laurent(self) -> bool:
        return self.data.dtype == object and any(isinstance(x, Laurent) for x in self.data.flat)

    # -- algebra ----------------------------------------------------------

    def _check_same(self, other: "LinOp"):
        if not isinstance(other, LinOp):
            raise TypeError("expected a LinOp")
        if other.dim != self.dim:
            raise DimMismatch(f"base dimensions {self.dim} and {other.dim} differ")
        if (other.out_legs, other.in_legs) != (self.out_legs, self.in_legs):
            raise ArityMismatch(
                f"arities {self.out_legs}<-{self.in_legs} and {other.out_legs}<-{other.in_legs} differ"
            )

    def __add__(self, other: "LinOp") -> "LinOp":
        self._check_same(other)
        return LinOp(self.dim, self.out_legs, self.in_legs, _add(self.data, other.data))

    def __sub__(self, other: "LinOp") -> "LinOp":
        self._check_same(other)
        return LinOp(self.dim, self.out_legs, self.in_legs, _add(self.data, _neg(other.data)))

    def __neg__(self) -> "LinOp":
        return LinOp(self.dim, self.out_legs, self.in_legs, _neg(self.data))

    def scale(self, c) -> "LinOp":
        c = normalize(c)
        if isinstance(c, int) and self.data.dtype == np.int64 and abs(c) < 2**31:
            big = int(np.abs(self.data).max()) if self.data.size else 0
            if big * abs(c) <= _INT64_MAX:
                return LinOp(self.dim, self.out_legs, self.in_legs, self.data * c)
        obj = self.data.astype(object)
        return LinOp(self.dim, self.out_legs, self.in_legs, obj * c)

    def __rmul__(self, c) -> "LinOp":
        return self.scale(c)

    def __matmul__(self, other: "LinOp") -> "LinOp":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinOp):
            return NotImplemented
        if (self.dim, self.out_legs, self.in_legs) != (other.dim, other.out_legs, other.in_legs):
            return False
        if self.data.dtype == np.int64 and other.data.dtype == np.int64:
            return bool(np.array_equal(self.data, other.data))
        return all(a == b for a, b in zip(self.data.flat, other.data.flat))

    def __hash__(self):
        return hash((self.dim, self.out_legs, self.in_legs, self.data.shape))

    def __repr__(self):
        return f"LinOp(dim={self.dim}, out_legs={self.out_legs}, in_legs={self.in_legs})"

    def transpose(self) -> "LinOp":
        return LinOp(self.dim, self.in_legs, self.out_legs, self.data.T.copy())

    def map_scalars(self, f: Callable) -> "LinOp":
        obj = np.empty(self.data.shape, dtype=object)
        src = self.data
        for idx in np.ndindex(*src.shape):
            obj[idx] = f(_py(src[idx]))
        return LinOp(self.dim, self.out_legs, self.in_legs, obj)


def _py(x):
    if isinstance(x, np.integer):
        return int(x)
    return x


def _obj_nonzero(arr: np.ndarray):
    rows, cols = [], []
    for (r, c), x in np.ndenumerate(arr):
        if x:
            rows.append(r)
            cols.append(c)
    return rows, cols


def _neg(a: np.ndarray) -> np.ndarray:
    if a.dtype == np.int64:
        if a.size and int(a.min()) == -_INT64_MAX - 1:
            return -(a.astype(object))
        return -a
    return -a


def _add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == np.int64 and b.dtype == np.int64:
        if a.size == 0:
            return a + b
        lim = 2**62
        if int(np.abs(a).max()) < lim and int(np.abs(b).max()) < lim:
            return a + b
    return a.astype(object) + b.astype(object)


# -- Laurent matrices as exponent stacks ------------------------------------------


def _has_laurent(arr: np.ndarray) -> bool:
    return arr.dtype == object and any(isinstance(x, Laurent) for x in arr.flat)


def laurent_split(arr: np.ndarray) -> dict:
    """``{exponent: coefficient matrix}`` with ``arr = sum q^e M_e``."""
    slices: dict = {}
    shape = arr.shape
    flat = arr.ravel()
    for pos, x in enumerate(flat):
        if not x:
            continue
        items = x.items() if isinstance(x, Laurent) else ((0, x),)
        for e, c in items:
            m = slices.get(e)
            if m is None:
                m = slices[e] = np.zeros(flat.size, dtype=object)
                m[:] = 0
            m[pos] = normalize(c)
    return {e: as_exact_array(m.reshape(shape)) for e, m in slices.items()}


def laurent_join(slices: dict, shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    terms = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        terms[idx] = {}
    for e, m in slices.items():
        for idx in zip(*np.nonzero(m != 0)):
            terms[idx][e] = _py(m[idx])
    for idx in np.ndindex(*shape):
        out[idx] = Laurent(terms[idx])
    return out


def _stack_add(acc: dict, e: int, m: np.ndarray):
    if e in acc:
        acc[e] = _add(acc[e], m)
    else:
        acc[e] = m


def _laurent_product(a: np.ndarray, b: np.ndarray, kernel) -> np.ndarray:
    sa, sb = laurent_split(a), laurent_split(b)
    acc: dict = {}
    for ea, ma in sa.items():
        for eb, mb in sb.items():
            _stack_add(acc, ea + eb, kernel(ma, mb))
    shape = None
    for m in acc.values():
        shape = m.shape
        break
    if shape is None:
        return None
    return laurent_join(acc, shape)


def identity(dim: int, legs: int) -> LinOp:
    return LinOp(dim, legs, legs, np.eye(dim**legs, dtype=np.int64))


def compose(a: LinOp, b: LinOp) -> LinOp:
    """``a`` after ``b``."""
    if a.dim != b.dim:
        raise DimMismatch(f"base dimensions {a.dim} and {b.dim} differ")
    if a.in_legs != b.out_legs:
        raise ArityMismatch(f"cannot compose: {a.in_legs} in-legs against {b.out_legs} out-legs")
    if _has_laurent(a.data) or _has_laurent(b.data):
        data = _laurent_product(a.data, b.data, _kernels.matmul)
        if data is None:
            return LinOp.zeros(a.dim, a.out_legs, b.in_legs)
        return LinOp(a.dim, a.out_legs, b.in_legs, data)
    return LinOp(a.dim, a.out_legs, b.in_legs, _kernels.matmul(a.data, b.data))


def kron(a: LinOp, b: LinOp) -> LinOp:
    """Tensor product; the legs of ``a`` come first."""
    if a.dim != b.dim:
        raise DimMismatch(f"base dimensions {a.dim} and {b.dim} differ")
    if a.data.dtype == np.int64 and b.data.dtype == np.int64:
        data = np.kron(a.data, b.data)
        big_a = int(np.abs(a.data).max()) if a.data.size else 0
        big_b = int(np.abs(b.data).max()) if b.data.size else 0
        if big_a * big_b > _INT64_MAX:
            data = np.kron(a.data.astype(object), b.data.astype(object))
    else:
        data = np.kron(a.data.astype(object), b.data.astype(object))
    return LinOp(a.dim, a.out_legs + b.out_legs, a.in_legs + b.in_legs, data)


def _check_position(op: LinOp, k: int, n: int):
    if k < 1 or k + op.out_legs - 1 > n or n - op.out_legs + op.in_legs < 0:
        raise OutOfRange(
            f"cannot place a {op.out_legs}-leg operator at position {k} of {n} legs"
        )


def embed_at(op: LinOp, k: int, n: int) -> LinOp:
    """Place ``op`` on legs ``k..`` of an ``n``-leg space, identity elsewhere.

    ``n`` counts the out-legs of the result.  For a mixed-arity operator
    the in-side has ``n - op.out_legs + op.in_legs`` legs.
    """
    _check_position(op, k, n)
    before = k - 1
    after = n - before - op.out_legs
    out = op
    if before:
        out = kron(identity(op.dim, before), out)
    if after:
        out = kron(out, identity(op.dim, after))
    return out


def apply_at(op: LinOp, k: int, target: LinOp, backend: Optional[str] = None) -> LinOp:
    """``embed_at(op, k, .) @ target`` without forming the embedding.

    ``op`` acts on the out-legs ``k..k+op.in_legs-1`` of ``target``.
    """
    if op.dim != target.dim:
        raise DimMismatch(f"base dimensions {op.dim} and {target.dim} differ")
    n = target.out_legs
    if k < 1 or k + op.in_legs - 1 > n:
        raise OutOfRange(f"cannot apply a {op.in_legs}-leg operator at position {k} of {n} legs")
    d = op.dim
    pre = d ** (k - 1)
    post = d ** (n - (k - 1) - op.in_legs)
    cols = target.data.shape[1]
    new_out = n - op.in_legs + op.out_legs
    if _has_laurent(op.data) or _has_laurent(target.data):
        kern = lambda o, t: _kernels.apply_local(  # noqa: E731
            o, t.reshape(pre, d**op.in_legs, post * cols), backend=backend
        ).reshape(d**new_out, cols)
        res = _laurent_product(op.data, target.data, kern)
        if res is None:
            return LinOp.zeros(d, new_out, target.in_legs)
        return LinOp(d, new_out, target.in_legs, res)
    mat = target.data.reshape(pre, d**op.in_legs, post * cols)
    res = _kernels.apply_local(op.data, mat, backend=backend)
    return LinOp(d, new_out, target.in_legs, res.reshape(d**new_out, cols))


# -- projectors and blocks ---------------------------------------------------


def _check_pattern(pattern: Sequence[str]):
    for p in pattern:
        if p not in (VECTOR, AUX, FULL):
            raise PatternMismatch(f"unknown leg flag {p!r}")


@dataclass(frozen=True)
class Projector:
    """Per-leg selection on ``V_{N+1}``: vector (1..N), aux (0) or full."""

    dim: int
    pattern: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        _check_pattern(self.pattern)
        if self.dim < 2:
            raise DimMismatch("projectors need the auxiliary index plus at least one vector index")

    @property
    def legs(self) -> int:
        return len(self.pattern)

    def leg_indices(self, leg: int):
        p = self.pattern[leg]
        if p == AUX:
            return [0]
        if p == VECTOR:
            return list(range(1, self.dim))
        return list(range(self.dim))

    def as_linop(self) -> LinOp:
        diag = np.zeros(self.dim**self.legs, dtype=np.int64)
        for idx in range(diag.size):
            multi = unravel(idx, self.dim, self.legs)
            if all(m in self.leg_indices(i) for i, m in enumerate(multi)):
                diag[idx] = 1
        return LinOp(self.dim, self.legs, self.legs, np.diag(diag))


def _block_indices(dim: int, pattern: Sequence[str]):
    _check_pattern(pattern)
    if FULL in pattern:
        raise PatternMismatch("block extraction needs every leg fixed to vector or aux")
    ranges = [[0] if p == AUX else range(1, dim) for p in pattern]
    idx = [0]
    for r in ranges:
        idx = [i * dim + x for i in idx for x in r]
    return np.array(idx, dtype=np.intp)


def project_block(op: LinOp, out_pattern, in_pattern) -> LinOp:
    """Sub-block of ``op`` over ``V_{N+1}`` as an operator over ``V_N``.

    Aux legs are fixed to index 0 and dropped; vector legs keep indices
    ``1..N`` (renumbered ``0..N-1``).
    """
    out_pattern = tuple(getattr(out_pattern, "pattern", out_pattern))
    in_pattern = tuple(getattr(in_pattern, "pattern", in_pattern))
    if len(out_pattern) != op.out_legs or len(in_pattern) != op.in_legs:
        raise PatternMismatch(
            f"patterns of length {len(out_pattern)}/{len(in_pattern)} do not match "
            f"arity {op.out_legs}/{op.in_legs}"
        )
    if op.dim < 2:
        raise PatternMismatch("block extraction needs base dimension at least 2")
    rows = _block_indices(op.dim, out_pattern)
    cols = _block_indices(op.dim, in_pattern)
    block = op.data[np.ix_(rows, cols)]
    return LinOp(op.dim - 1, out_pattern.count(VECTOR), in_pattern.count(VECTOR), block)


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class Difference:
    """First differing component of two operators."""

    out_index: Tuple[int, ...]
    in_index: Tuple[int, ...]
    left: object
    right: object

    def as_dict(self):
        from .scalars import format_scalar

        return {
            "out_index": list(self.out_index),
            "in_index": list(self.in_index),
            "left": format_scalar(self.left),
            "right": format_scalar(self.right),
        }


def first_difference(a: LinOp, b: LinOp) -> Optional[Difference]:
    """Row-major first component where ``a`` and ``b`` differ, or None."""
    if (a.dim, a.out_legs, a.in_legs) != (b.dim, b.out_legs, b.in_legs):
        raise ArityMismatch("cannot compare operators of different shapes")
    if a.data.dtype == np.int64 and b.data.dtype == np.int64:
        diff = np.argwhere(a.data != b.data)
        if not len(diff):
            return None
        r, c = (int(x) for x in diff[0])
    else:
        found = None
        for (r, c), x in np.ndenumerate(a.data):
            if x != b.data[r, c]:
                found = (r, c)
                break
        if found is None:
            return None
        r, c = found
    return Difference(
        unravel(r, a.dim, a.out_legs),
        unravel(c, a.dim, a.in_legs),
        normalize(_py(a.data[r, c])),
        normalize(_py(b.data[r, c])),
    )
