# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels with overflow detection.

Both kernels skip zero entries of the left factor, which is what makes
them pay off on braid-group matrices (a handful of nonzeros per row).
When the entry bounds rule out overflow the inner loop is unchecked;
otherwise every step is checked and an overflow raises OverflowError so
the caller can redo the computation with Python integers.  Mostly dense
left factors with a bound under 2**53 go to BLAS in float64 instead,
which is exact there and faster than any zero-skipping loop.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef long long _LIMIT = 1LL << 62
cdef long long _DOUBLE = 1LL << 53


cdef long long _absmax2(const cnp.int64_t[:, ::1] a) nogil:
    cdef Py_ssize_t i, j
    cdef long long m = 0, v
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            v = a[i, j]
            if v < 0:
                v = -v
            if v > m:
                m = v
    return m


cdef bint _bounded(long long ma, long long mb, Py_ssize_t inner) nogil:
    if ma == 0 or mb == 0:
        return True
    if inner < 1:
        inner = 1
    if ma > _LIMIT // mb:
        return False
    return ma * mb <= _LIMIT // inner

cdef Py_ssize_t _nonzeros(const cnp.int64_t[:, ::1] a) nogil:
    cdef Py_ssize_t i, j, c = 0
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0:
                c += 1
    return c


cdef bint _use_blas(long long ma, long long mb, Py_ssize_t inner, Py_ssize_t nnz, Py_ssize_t size) nogil:
    if ma == 0 or mb == 0 or inner < 1:
        return False
    if ma > _DOUBLE // mb or ma * mb > _DOUBLE // inner:
        return False
    return 4 * nnz > size


cdef extern from *:
    """
    static inline int qb_muladd(long long acc, long long a, long long b, long long *out) {
        long long p;
        if (__builtin_mul_overflow(a, b, &p)) return 1;
        if (__builtin_add_overflow(acc, p, out)) return 1;
        return 0;
    }
    """
    int qb_muladd(long long acc, long long a, long long b, long long *out) nogil


def matmul(const cnp.int64_t[:, ::1] a, const cnp.int64_t[:, ::1] b):
    cdef Py_ssize_t m = a.shape[0], k = a.shape[1], n = b.shape[1]
    if b.shape[0] != k:
        raise ValueError("inner dimensions differ")
    cdef long long ma, mb
    cdef bint blas
    with nogil:
        ma, mb = _absmax2(a), _absmax2(b)
        blas = _use_blas(ma, mb, k, _nonzeros(a), m * k)
    if blas:
        return np.matmul(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)).astype(np.int64)
    out = np.zeros((m, n), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] o = out
    cdef Py_ssize_t i, j, l
    cdef long long av, res
    cdef int bad = 0, fast = 0
    with nogil:
        if _bounded(ma, mb, k):
            for i in range(m):
                for l in range(k):
                    av = a[i, l]
                    if av == 0:
                        continue
                    for j in range(n):
                        o[i, j] += av * b[l, j]
            fast = 1
    if fast:
        return out
    with nogil:
        for i in range(m):
            for l in range(k):
                av = a[i, l]
                if av == 0:
                    continue
                for j in range(n):
                    if b[l, j] == 0:
                        continue
                    if qb_muladd(o[i, j], av, b[l, j], &res):
                        bad = 1
                        break
                    o[i, j] = res
                if bad:
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in matmul")
    return out


def apply_local(const cnp.int64_t[:, ::1] op, const cnp.int64_t[:, :, ::1] mat):
    """out[p, o, r] = sum_i op[o, i] * mat[p, i, r]."""
    cdef Py_ssize_t pre = mat.shape[0], din = mat.shape[1], rest = mat.shape[2]
    cdef Py_ssize_t dout = op.shape[0]
    if op.shape[1] != din:
        raise ValueError("operator arity does not match the tensor leg")
    cdef Py_ssize_t p, oi, ii, r
    cdef long long c, res, mm = 0, mo
    cdef int bad = 0, fast = 0
    cdef bint blas
    cdef const cnp.int64_t[:, ::1] flat = np.asarray(mat).reshape(pre * din, rest)
    with nogil:
        mm = _absmax2(flat) if pre * din * rest else 0
        mo = _absmax2(op)
        blas = _use_blas(mo, mm, din, _nonzeros(op), dout * din)
    if blas:
        return np.matmul(np.asarray(op, dtype=np.float64), np.asarray(mat, dtype=np.float64)).astype(np.int64)
    out = np.zeros((pre, dout, rest), dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] o = out
    with nogil:
        if _bounded(mo, mm, din):
            for p in range(pre):
                for oi in range(dout):
                    for ii in range(din):
                        c = op[oi, ii]
                        if c == 0:
                            continue
                        for r in range(rest):
                            o[p, oi, r] += c * mat[p, ii, r]
            fast = 1
    if fast:
        return out
    with nogil:
        for oi in range(dout):
            for ii in range(din):
                c = op[oi, ii]
                if c == 0:
                    continue
                for p in range(pre):
                    for r in range(rest):
                        if mat[p, ii, r] == 0:
                            continue
                        if qb_muladd(o[p, oi, r], c, mat[p, ii, r], &res):
                            bad = 1
                            break
                        o[p, oi, r] = res
                    if bad:
                        break
                if bad:
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in apply_local")
    return out
