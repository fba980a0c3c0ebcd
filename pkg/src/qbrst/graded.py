"""Grading matrices, transformed constants and the super case.

A grading matrix ``D`` is an invertible N x N operator.  It is compatible
with the structure constants when

    (D (x) D) sigma = sigma (D (x) D)      and      (D (x) D) C = C D ,

in which case conjugating by ``D`` leaves ``(sigma, C)`` unchanged.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import exact_linalg
from .braid import antisymmetrizer_op
from .multilinear import LinOp, first_difference, identity, kron
from .qlie import ShapeError, StructureConstants, build_extended_r, check_yang_baxter
from .report import VerificationReport

__all__ = [
    "GradingMatrix",
    "parity_grading",
    "validate_grading",
    "transform_structure",
    "check_twisted_yang_baxter",
    "twisted_antisymmetrizer",
    "super_permutation_sigma",
    "twisted_super_permutation",
    "verify_grading",
]


@dataclass(frozen=True)
class GradingMatrix:
    op: LinOp
    parities: Optional[tuple] = None

    def __post_init__(self):
        if (self.op.out_legs, self.op.in_legs) != (1, 1):
            raise ShapeError("a grading matrix acts on a single leg")

    @property
    def n(self) -> int:
        return self.op.dim

    def is_invertible(self) -> bool:
        return exact_linalg.det(self.op.data) != 0

    def inverse(self) -> LinOp:
        return LinOp(self.n, 1, 1, exact_linalg.inverse(self.op.data))

    @classmethod
    def identity(cls, n: int) -> "GradingMatrix":
        return cls(identity(n, 1))

    @classmethod
    def diagonal(cls, values: Sequence) -> "GradingMatrix":
        n = len(values)
        data = np.zeros((n, n), dtype=object)
        data[:] = 0
        for i, v in enumerate(values):
            data[i, i] = v
        return cls(LinOp(n, 1, 1, data))


def parity_grading(parities: Sequence[int]) -> GradingMatrix:
    """``diag((-1)^p_i)``."""
    g = GradingMatrix.diagonal([(-1) ** p for p in parities])
    return GradingMatrix(g.op, tuple(parities))


def _as_grading(d) -> GradingMatrix:
    return d if isinstance(d, GradingMatrix) else GradingMatrix(d)


def _check_shape(sc: StructureConstants, d: GradingMatrix):
    if d.n != sc.n:
        raise ShapeError(f"grading matrix has dimension {d.n}, algebra has {sc.n}")


def validate_grading(sc: StructureConstants, d) -> VerificationReport:
    d = _as_grading(d)
    _check_shape(sc, d)
    report = VerificationReport(f"grading for {sc.name}")
    t0 = time.perf_counter()
    inv = d.is_invertible()
    report.add("grading_invertible", (sc.name,), inv, None if inv else {"det": "0"}, time.perf_counter() - t0)
    dd = kron(d.op, d.op)
    t0 = time.perf_counter()
    lhs, rhs = dd @ sc.sigma, sc.sigma @ dd
    report.add("grading_commutes_sigma", (sc.name,), lhs == rhs, first_difference(lhs, rhs),
               time.perf_counter() - t0)
    t0 = time.perf_counter()
    lhs, rhs = dd @ sc.c, sc.c @ d.op
    report.add("grading_scales_c", (sc.name,), lhs == rhs, first_difference(lhs, rhs), time.perf_counter() - t0)
    return report


def transform_structure(sc: StructureConstants, d) -> StructureConstants:
    """``sigma' = D1 D2 sigma D1^-1 D2^-1`` and ``C' = D1 D2 C D^-1``."""
    d = _as_grading(d)
    _check_shape(sc, d)
    di = d.inverse()
    dd, ddi = kron(d.op, d.op), kron(di, di)
    return StructureConstants(
        sc.n,
        dd @ sc.sigma @ ddi,
        dd @ sc.c @ di,
        name=f"{sc.name}^D",
        field=sc.field,
        grading=sc.grading,
        parities=sc.parities,
    )


def _extended(d: LinOp) -> LinOp:
    n = d.dim
    data = np.zeros((n + 1, n + 1), dtype=object)
    data[:] = 0
    data[0, 0] = 1
    data[1:, 1:] = d.data
    return LinOp(n + 1, 1, 1, data)


def check_twisted_yang_baxter(sc: StructureConstants, d) -> VerificationReport:
    """Yang-Baxter for ``D_1 R D_1^-1`` with D extended by 1 on the aux index."""
    d = _as_grading(d)
    _check_shape(sc, d)
    e, ei = _extended(d.op), _extended(d.inverse())
    one = identity(sc.n + 1, 1)
    r = kron(e, one) @ build_extended_r(sc) @ kron(ei, one)
    rep = check_yang_baxter(r, label=f"{sc.name}:D")
    rep.title = f"twisted Yang-Baxter for {sc.name}"
    return rep


def twisted_antisymmetrizer(sc: StructureConstants, d, n: int) -> LinOp:
    """``D_1^-1 ... D_{n-1}^-1 A_{1->n} D_1 ... D_{n-1}``."""
    d = _as_grading(d)
    _check_shape(sc, d)
    a = antisymmetrizer_op(sc.sigma_rep(), n)
    if n == 1:
        return a
    left, right = d.inverse(), d.op
    for _ in range(n - 2):
        left, right = kron(left, d.inverse()), kron(right, d.op)
    one = identity(sc.n, 1)
    return kron(left, one) @ a @ kron(right, one)


def super_permutation_sigma(parities: Sequence[int]) -> LinOp:
    """``sigma^{mk}_{ij} = (-1)^{p(m) p(k)} delta^m_j delta^k_i``."""
    n = len(parities)
    entries = []
    for i in range(n):
        for j in range(n):
            entries.append(((i, j), (j, i), (-1) ** (parities[i] * parities[j])))
    return LinOp.from_entries(n, 2, 2, entries)


def twisted_super_permutation(parities: Sequence[int]) -> LinOp:
    """``D_1 sigma D_1^-1`` for the super-permutation and its parity grading."""
    n = len(parities)
    d = parity_grading(parities)
    one = identity(n, 1)
    return kron(d.op, one) @ super_permutation_sigma(parities) @ kron(d.inverse(), one)


def _twisted_formula(parities: Sequence[int]) -> LinOp:
    """``-(-1)^{(p(m)+1)(p(k)+1)} delta^m_j delta^k_i``."""
    n = len(parities)
    entries = []
    for i in range(n):
        for j in range(n):
            entries.append(((i, j), (j, i), -((-1) ** ((parities[j] + 1) * (parities[i] + 1)))))
    return LinOp.from_entries(n, 2, 2, entries)


def verify_grading(sc: StructureConstants, d=None, n_max: int = 3) -> VerificationReport:
    """Everything above for ``sc`` and ``d`` (default: the file's grading)."""
    if d is None:
        if sc.grading is None:
            report = VerificationReport(f"grading for {sc.name}")
            report.add("grading_present", (sc.name,), None, None, 0.0, "no grading matrix declared")
            return report
        d = GradingMatrix(sc.grading, sc.parities)
    d = _as_grading(d)
    report = validate_grading(sc, d)
    t0 = time.perf_counter()
    sc2 = transform_structure(sc, d)
    diff = first_difference(sc2.sigma, sc.sigma) or first_difference(sc2.c, sc.c)
    report.add("transform_fixed_point", (sc.name,), diff is None, diff, time.perf_counter() - t0)
    report.extend(check_twisted_yang_baxter(sc, d))
    srep = sc.sigma_rep()
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        same = twisted_antisymmetrizer(sc, d, n).is_zero() == antisymmetrizer_op(srep, n).is_zero()
        report.add("twisted_antisymmetrizer_height", (sc.name, n), same, None, time.perf_counter() - t0)
    if sc.parities is not None:
        t0 = time.perf_counter()
        sp = super_permutation_sigma(sc.parities)
        diff = first_difference(sp, sc.sigma)
        report.add("super_permutation_matches", (sc.name,), diff is None, diff, time.perf_counter() - t0)
        t0 = time.perf_counter()
        tw, formula = twisted_super_permutation(sc.parities), _twisted_formula(sc.parities)
        diff = first_difference(tw, formula)
        report.add("twisted_super_permutation", (sc.name,), diff is None, diff, time.perf_counter() - t0)
    return report
