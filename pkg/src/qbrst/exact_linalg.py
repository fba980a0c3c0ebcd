"""Exact Gaussian elimination over the rationals and over Q(q).

Matrices are plain nested sequences (or 2-d numpy object arrays) of
package scalars.  Rational input is eliminated over ``Fraction``; input
containing :class:`~qbrst.scalars.Laurent` entries is eliminated over the
rational function field Q(q) and mapped back to Laurent polynomials when
the answer allows it.

Pivoting is deterministic: the first nonzero entry in the current column
(top to bottom) is used, except that in Q(q) a monomial entry is preferred
when one exists.  Free variables are always set to zero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.fields import field

from .scalars import Laurent, NonInvertibleLaurent, normalize

__all__ = [
    "LinalgError",
    "NoSolution",
    "SingularMatrix",
    "Field",
    "field_for",
    "rref",
    "rank",
    "det",
    "inverse",
    "solve",
    "kernel",
    "generalized_inverse",
]


class LinalgError(ArithmeticError):
    pass


class NoSolution(LinalgError):
    pass


class SingularMatrix(LinalgError):
    pass


_QF, _qsym = field("q", QQ)


def _mpq_to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class Field:
    """Conversion between package scalars and an elimination field."""

    laurent = False

    def to(self, x):
        return Fraction(x)

    def back(self, x):
        return normalize(x)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_monomial(self, x) -> bool:
        return True


class _LaurentField(Field):
    laurent = True

    def to(self, x):
        if isinstance(x, Laurent):
            out = _QF.zero
            for e, c in x.items():
                out += QQ(c.numerator, c.denominator) * _qsym**e
            return out
        f = Fraction(x)
        return _QF(QQ(f.numerator, f.denominator))

    def back(self, x):
        num, den = x.numer, x.denom
        dterms = den.terms()
        if len(dterms) != 1:
            raise NonInvertibleLaurent(f"{x} is not a Laurent polynomial")
        ((de,), dc), = dterms
        dc = _mpq_to_fraction(dc)
        terms = {}
        for (e,), c in num.terms():
            terms[e - de] = _mpq_to_fraction(c) / dc
        return Laurent(terms)

    def zero(self):
        return _QF.zero

    def one(self):
        return _QF.one

    def is_monomial(self, x) -> bool:
        return len(x.numer.terms()) == 1 and len(x.denom.terms()) == 1


RATIONAL = Field()
LAURENT = _LaurentField()


def field_for(*mats) -> Field:
    """Rational field unless some entry is a Laurent polynomial."""
    for m in mats:
        arr = np.asarray(m, dtype=object)
        for x in arr.flat:
            if isinstance(x, Laurent):
                return LAURENT
    return RATIONAL


def _to_rows(M, fld: Field) -> List[list]:
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [[fld.to(x) for x in row] for row in arr]


def _rref_rows(rows: List[list], fld: Field, ncols=None, aug: List[list] | None = None):
    """In-place reduced row echelon form; returns pivot column list.

    If ``aug`` is given, the same row operations are applied to it.
    Only the first ``ncols`` columns are used for pivoting.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if ncols is None:
        ncols = n
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= m:
            break
        piv = None
        for i in range(r, m):
            if rows[i][col]:
                if piv is None:
                    piv = i
                if not fld.laurent or fld.is_monomial(rows[i][col]):
                    piv = i
                    break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if aug is not None:
                aug[r], aug[piv] = aug[piv], aug[r]
        p = rows[r][col]
        inv = fld.one() / p
        rows[r] = [x * inv for x in rows[r]]
        if aug is not None:
            aug[r] = [x * inv for x in aug[r]]
        prow = rows[r]
        nz = [j for j in range(n) if prow[j]]
        anz = [j for j in range(len(aug[r])) if aug[r][j]] if aug is not None else []
        for i in range(m):
            if i == r:
                continue
            f = rows[i][col]
            if not f:
                continue
            row = rows[i]
            for j in nz:
                row[j] = row[j] - f * prow[j]
            if aug is not None:
                arow, apr = aug[i], aug[r]
                for j in anz:
                    arow[j] = arow[j] - f * apr[j]
        pivots.append(col)
        r += 1
    return pivots


def rref(M, fld: Field | None = None) -> Tuple[List[list], List[int]]:
    """Reduced row echelon form as field elements plus pivot columns."""
    fld = fld or field_for(M)
    rows = _to_rows(M, fld)
    pivots = _rref_rows(rows, fld)
    return rows, pivots


def rank(M) -> int:
    arr = np.asarray(M, dtype=object)
    if arr.size == 0:
        return 0
    return len(rref(arr)[1])


def _back_matrix(rows, fld: Field, shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    for i in range(shape[0]):
        for j in range(shape[1]):
            out[i, j] = fld.back(rows[i][j])
    return out


def det(M):
    """Exact determinant by fraction-tracking elimination."""
    fld = field_for(M)
    rows = _to_rows(M, fld)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    d = fld.one()
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col]), None)
        if piv is None:
            return fld.back(fld.zero())
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            d = -d
        p = rows[col][col]
        d = d * p
        for i in range(col + 1, n):
            f = rows[i][col]
            if f:
                f = f / p
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
    return fld.back(d)


def inverse(M) -> np.ndarray:
    """Exact inverse; raises SingularMatrix (or NonInvertibleLaurent)."""
    fld = field_for(M)
    rows = _to_rows(M, fld)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("inverse of a non-square matrix")
    aug = [[fld.one() if i == j else fld.zero() for j in range(n)] for i in range(n)]
    pivots = _rref_rows(rows, fld, aug=aug)
    if len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return _back_matrix(aug, fld, (n, n))


def solve(A, B) -> np.ndarray:
    """One solution X of ``A X = B`` with free variables zero.

    ``B`` may be a vector or a matrix.  Raises NoSolution when B is not in
    the column space of A.
    """
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    vec = B.ndim == 1
    if vec:
        B = B.reshape(-1, 1)
    fld = field_for(A, B)
    m, n = A.shape
    rows = _to_rows(A, fld)
    aug = _to_rows(B, fld)
    pivots = _rref_rows(rows, fld, aug=aug)
    k = B.shape[1]
    for i in range(len(pivots), m):
        if any(aug[i][j] for j in range(k)):
            raise NoSolution("right-hand side is not in the column space")
    X = [[fld.zero()] * k for _ in range(n)]
    for i, col in enumerate(pivots):
        X[col] = list(aug[i])
    out = _back_matrix(X, fld, (n, k))
    return out[:, 0] if vec else out


def kernel(A) -> List[np.ndarray]:
    """Basis of the right null space, one vector per free column."""
    A = np.asarray(A, dtype=object)
    fld = field_for(A)
    m, n = A.shape
    rows = _to_rows(A, fld) if m else []
    pivots = _rref_rows(rows, fld) if m else []
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [fld.zero()] * n
        v[f] = fld.one()
        for i, col in enumerate(pivots):
            v[col] = -rows[i][f]
        basis.append(np.array([fld.back(x) for x in v], dtype=object))
    return basis


def generalized_inverse(A) -> np.ndarray:
    """A matrix G with ``A G A = A`` built from a rank factorization."""
    A = np.asarray(A, dtype=object)
    m, n = A.shape
    fld = field_for(A)
    _, colpiv = rref(A, fld)
    G = np.zeros((n, m), dtype=object)
    if not colpiv:
        return G
    sub = A[:, colpiv]
    _, rowpiv = rref(sub.T, fld)
    inv = inverse(sub[rowpiv, :])
    for a, col in enumerate(colpiv):
        for b, row in enumerate(rowpiv):
            G[col, row] = inv[a, b]
    return G


def as_sequence(x) -> Sequence:
    return list(np.asarray(x, dtype=object).flat)
