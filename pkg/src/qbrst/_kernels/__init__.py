"""Kernel backend selection.

The compiled extension is used when it was built and importable, unless
``QBRST_PURE_PYTHON=1`` is set.  Both backends share the same contract:
exact results, int64 in and out when nothing overflows, object arrays of
Python scalars otherwise.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("QBRST_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python kernels requested")
    from . import _ckernels as _compiled
except ImportError:
    _compiled = None

HAVE_COMPILED = _compiled is not None
BACKEND = "compiled" if HAVE_COMPILED else "python"

__all__ = ["BACKEND", "HAVE_COMPILED", "matmul", "apply_local", "backend_module"]


def backend_module(name: str | None = None):
    """Kernel module by name (``compiled`` or ``python``); default active."""
    name = name or BACKEND
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    if name == "python":
        return _pykernels
    raise ValueError(f"unknown backend {name!r}")


def _is_int(a: np.ndarray) -> bool:
    return a.dtype == np.int64


def matmul(a: np.ndarray, b: np.ndarray, backend: str | None = None) -> np.ndarray:
    mod = backend_module(backend)
    if _is_int(a) and _is_int(b):
        try:
            return mod.matmul(np.ascontiguousarray(a), np.ascontiguousarray(b))
        except OverflowError:
            pass
    return _pykernels.matmul(a.astype(object), b.astype(object))


def apply_local(op: np.ndarray, mat: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Apply ``op`` (dout x din) to the middle axis of ``mat`` (pre, din, rest)."""
    mod = backend_module(backend)
    if _is_int(op) and _is_int(mat):
        try:
            return mod.apply_local(np.ascontiguousarray(op), np.ascontiguousarray(mat))
        except OverflowError:
            pass
    return _pykernels.apply_local(op.astype(object), mat.astype(object))
