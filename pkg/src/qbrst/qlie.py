"""Quantum Lie algebra structure constants.

A quantum Lie algebra on generators ``chi_1..chi_N`` is given by a braid
matrix ``sigma`` and a bracket tensor ``C`` with relations
``chi_i chi_j - sigma^{kl}_{ij} chi_k chi_l = C^k_{ij} chi_k``.

Operator layout: ``sigma`` is a 2-leg -> 2-leg :class:`LinOp` with
``sigma.data[(i,j), (k,l)] = sigma^{kl}_{ij}``; ``C`` is a 1-leg -> 2-leg
LinOp with ``C.data[(i,j), k] = C^k_{ij}`` (lower indices index rows).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import exact_linalg
from .braid import Representation, build_jucys_murphy, evaluate
from .multilinear import (
    AUX,
    VECTOR,
    LinOp,
    compose,
    embed_at,
    first_difference,
    identity,
    kron,
    project_block,
)
from .report import VerificationReport
from .scalars import Laurent, ScalarParseError, format_scalar, parse_scalar, specialize

__all__ = [
    "StructureError",
    "ShapeError",
    "NoSolution",
    "StructureConstants",
    "TLift",
    "load_structure",
    "parse_structure",
    "structure_to_dict",
    "bundled",
    "bundled_names",
    "validate_structure",
    "relation_sides",
    "build_extended_r",
    "check_yang_baxter",
    "sigma_representation",
    "r_representation",
    "solve_t_lift",
    "build_z",
    "build_z_explicit",
    "z_from_jucys_murphy",
    "check_declared_properties",
]

DATA_DIR = Path(__file__).resolve().parent / "data"
KNOWN_PROPERTIES = ("sigma_involutive", "sigma_symmetric", "c_zero")


class StructureError(ValueError):
    """Malformed structure-constant input (bad field, index, scalar...)."""


class ShapeError(StructureError):
    pass


class NoSolution(ArithmeticError):
    pass


@dataclass
class StructureConstants:
    n: int
    sigma: LinOp
    c: LinOp
    name: str = ""
    field: str = "rational"
    properties: Tuple[str, ...] = ()
    grading: Optional[LinOp] = None
    parities: Optional[Tuple[int, ...]] = None
    _cache: Dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.sigma.dim != self.n or (self.sigma.out_legs, self.sigma.in_legs) != (2, 2):
            raise ShapeError("sigma must be a 2-leg operator over the generator space")
        if self.c.dim != self.n or (self.c.out_legs, self.c.in_legs) != (2, 1):
            raise ShapeError("C must map one leg to two legs over the generator space")
        if self.grading is not None and (
            self.grading.dim != self.n or (self.grading.out_legs, self.grading.in_legs) != (1, 1)
        ):
            raise ShapeError("grading must be an N x N matrix")

    @property
    def is_laurent(self) -> bool:
        return self.field == "laurent"

    def cached(self, key, make):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    def specialize(self, q0) -> "StructureConstants":
        """Evaluate every Laurent entry at ``q = q0``."""
        f = lambda x: specialize(x, q0)  # noqa: E731
        return StructureConstants(
            self.n,
            self.sigma.map_scalars(f),
            self.c.map_scalars(f),
            name=self.name,
            field="rational",
            properties=self.properties,
            grading=self.grading.map_scalars(f) if self.grading is not None else None,
            parities=self.parities,
        )

    def with_c(self, c: LinOp) -> "StructureConstants":
        return StructureConstants(self.n, self.sigma, c, self.name, self.field, self.properties,
                                  self.grading, self.parities)

    def sigma_rep(self) -> Representation:
        return self.cached("sigma_rep", lambda: Representation(self.sigma, name=f"{self.name}:sigma"))

    def r_rep(self) -> Representation:
        return self.cached("r_rep", lambda: Representation(build_extended_r(self), name=f"{self.name}:R"))


# -- file format ----------------------------------------------------------------


def _scalar(value, where: str, laurent: bool):
    try:
        s = parse_scalar(value if isinstance(value, str) else str(value))
    except ScalarParseError as exc:
        raise StructureError(f"{where}: {exc}") from None
    if isinstance(s, Laurent) and not laurent:
        raise StructureError(f"{where}: Laurent scalar {value!r} in a rational-field file")
    return s


def _index(value, n: int, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= n:
        raise StructureError(f"{where}: index {value!r} outside 1..{n}")
    return value - 1


def parse_structure(doc: dict) -> StructureConstants:
    """Build structure constants from the JSON document layout."""
    if not isinstance(doc, dict):
        raise StructureError("structure document must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise StructureError(f"'n' must be a positive integer, got {n!r}")
    fld = doc.get("field", "rational")
    if fld not in ("rational", "laurent"):
        raise StructureError(f"'field' must be 'rational' or 'laurent', got {fld!r}")
    laurent = fld == "laurent"
    sig = np.zeros((n * n, n * n), dtype=object)
    sig[:] = 0
    for pos, entry in enumerate(doc.get("sigma", [])):
        where = f"sigma[{pos}]"
        if not isinstance(entry, list) or len(entry) != 5:
            raise StructureError(f"{where}: expected [i, j, k, l, scalar]")
        i, j, k, l = (_index(x, n, where) for x in entry[:4])
        sig[i * n + j, k * n + l] += _scalar(entry[4], where, laurent)
    cc = np.zeros((n * n, n), dtype=object)
    cc[:] = 0
    for pos, entry in enumerate(doc.get("c", [])):
        where = f"c[{pos}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise StructureError(f"{where}: expected [i, j, k, scalar]")
        i, j, k = (_index(x, n, where) for x in entry[:3])
        cc[i * n + j, k] += _scalar(entry[3], where, laurent)
    grading = None
    if doc.get("grading") is not None:
        g = np.zeros((n, n), dtype=object)
        g[:] = 0
        for pos, entry in enumerate(doc["grading"]):
            where = f"grading[{pos}]"
            if not isinstance(entry, list) or len(entry) != 3:
                raise StructureError(f"{where}: expected [i, j, scalar]")
            i, j = (_index(x, n, where) for x in entry[:2])
            g[j, i] += _scalar(entry[2], where, laurent)
        grading = LinOp(n, 1, 1, g)
    props = doc.get("properties", [])
    if not isinstance(props, list) or any(p not in KNOWN_PROPERTIES for p in props):
        raise StructureError(f"'properties' must list names from {KNOWN_PROPERTIES}")
    parities = doc.get("parities")
    if parities is not None:
        if not isinstance(parities, list) or len(parities) != n or any(p not in (0, 1) for p in parities):
            raise StructureError("'parities' must be a list of N entries in {0, 1}")
        parities = tuple(parities)
    return StructureConstants(
        n,
        LinOp(n, 2, 2, sig),
        LinOp(n, 2, 1, cc),
        name=str(doc.get("name", "")),
        field=fld,
        properties=tuple(props),
        grading=grading,
        parities=parities,
    )


def load_structure(path: Union[str, Path]) -> StructureConstants:
    p = Path(path)
    if not p.exists() and (DATA_DIR / f"{p.name}").exists():
        p = DATA_DIR / p.name
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise StructureError(f"{p}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise StructureError(f"{p}: {exc.strerror}") from None
    sc = parse_structure(doc)
    if not sc.name:
        sc.name = p.stem
    return sc


def structure_to_dict(sc: StructureConstants) -> dict:
    n = sc.n
    doc = {"name": sc.name, "n": n, "field": sc.field, "sigma": [], "c": []}
    for (i, j), (k, l), v in sc.sigma.nonzero_entries():
        doc["sigma"].append([i + 1, j + 1, k + 1, l + 1, format_scalar(v)])
    for (i, j), (k,), v in sc.c.nonzero_entries():
        doc["c"].append([i + 1, j + 1, k + 1, format_scalar(v)])
    if sc.grading is not None:
        doc["grading"] = [[i + 1, j + 1, format_scalar(v)]
                          for (j,), (i,), v in sc.grading.nonzero_entries()]
        doc["grading"].sort()
    if sc.parities is not None:
        doc["parities"] = list(sc.parities)
    if sc.properties:
        doc["properties"] = list(sc.properties)
    return doc


def bundled_names() -> List[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.json"))


def bundled(name: str) -> StructureConstants:
    path = DATA_DIR / f"{name}.json"
    if not path.exists():
        raise StructureError(f"no bundled algebra named {name!r}")
    return load_structure(path)


# -- constraints -------------------------------------------------------------


def relation_sides(sc: StructureConstants) -> List[Tuple[str, LinOp, LinOp]]:
    """The four constraint relations as (name, lhs, rhs) operator pairs."""
    N = sc.n
    s, C = sc.sigma, sc.c
    I1 = identity(N, 1)
    s1, s2 = kron(s, I1), kron(I1, s)
    C1, C2 = kron(C, I1), kron(I1, C)
    braid = (s1 @ s2 @ s1, s2 @ s1 @ s2)
    jacobi = (C1 @ C, s2 @ C1 @ C + C2 @ C)
    c_sigma = (C1 @ s, s2 @ s1 @ C2)
    mixed = s2 @ C1 + C2
    mixed_rel = (mixed @ s, s1 @ mixed)
    return [
        ("braid_relation", *braid),
        ("q_jacobi", *jacobi),
        ("c_sigma_sigma", *c_sigma),
        ("mixed_commutation", *mixed_rel),
    ]


def _sigma_minus_one(sc: StructureConstants) -> np.ndarray:
    return sc.sigma.data.astype(object) - np.eye(sc.n**2, dtype=np.int64).astype(object)


def validate_structure(sc: StructureConstants) -> VerificationReport:
    report = VerificationReport(f"structure constraints of {sc.name or 'algebra'}")
    t0 = time.perf_counter()
    d = exact_linalg.det(sc.sigma.data)
    report.add("sigma_invertible", (sc.name,), d != 0, {"det": d}, time.perf_counter() - t0)
    t0 = time.perf_counter()
    d1 = exact_linalg.det(_sigma_minus_one(sc))
    report.add("sigma_eigenvalue_one", (sc.name,), d1 == 0, {"det(sigma-1)": d1},
               time.perf_counter() - t0)
    for name, lhs, rhs in relation_sides(sc):
        t0 = time.perf_counter()
        diff = first_difference(lhs, rhs)
        report.add(name, (sc.name,), diff is None, diff, time.perf_counter() - t0)
    return report


def check_declared_properties(sc: StructureConstants) -> VerificationReport:
    report = VerificationReport(f"declared properties of {sc.name or 'algebra'}")
    for prop in sc.properties:
        t0 = time.perf_counter()
        if prop == "sigma_involutive":
            lhs, rhs = sc.sigma @ sc.sigma, identity(sc.n, 2)
        elif prop == "sigma_symmetric":
            lhs, rhs = sc.sigma, sc.sigma.transpose()
        else:
            lhs, rhs = sc.c, LinOp.zeros(sc.n, 2, 1)
        diff = first_difference(lhs, rhs)
        report.add(f"property:{prop}", (sc.name,), diff is None, diff, time.perf_counter() - t0)
    return report


# -- extended R-matrix ---------------------------------------------------------


def build_extended_r(sc: StructureConstants) -> LinOp:
    """The ``(N+1)^2 x (N+1)^2`` matrix packaging sigma, C and identity blocks.

    Index 0 of ``V_{N+1}`` is the auxiliary index; generator ``i`` sits at
    index ``i + 1``.
    """
    N = sc.n
    D = N + 1
    R = np.zeros((D * D, D * D), dtype=object)
    R[:] = 0
    sig, C = sc.sigma.data, sc.c.data
    for a in range(N * N):
        k, l = divmod(a, N)
        row = (k + 1) * D + (l + 1)
        for b in range(N * N):
            i, j = divmod(b, N)
            R[row, (i + 1) * D + (j + 1)] = sig[a, b]
        for j in range(N):
            R[row, 0 * D + (j + 1)] = C[a, j]
    for A in range(D):
        R[A * D + 0, 0 * D + A] = 1
        R[0 * D + A, A * D + 0] = 1
    return LinOp(D, 2, 2, R)


def check_yang_baxter(r: Union[LinOp, StructureConstants], label: str = "") -> VerificationReport:
    """Braid-form Yang-Baxter ``R_1 R_2 R_1 = R_2 R_1 R_2`` on three legs."""
    if isinstance(r, StructureConstants):
        label = label or r.name
        r = build_extended_r(r)
    report = VerificationReport(f"Yang-Baxter for {label or 'R'}")
    t0 = time.perf_counter()
    I1 = identity(r.dim, 1)
    r1, r2 = kron(r, I1), kron(I1, r)
    diff = first_difference(r1 @ r2 @ r1, r2 @ r1 @ r2)
    report.add("yang_baxter", (label,), diff is None, diff, time.perf_counter() - t0)
    return report


def sigma_representation(sc: StructureConstants) -> Representation:
    return sc.sigma_rep()


def r_representation(sc: StructureConstants) -> Representation:
    return sc.r_rep()


# -- t-lift --------------------------------------------------------------------


@dataclass
class TLift:
    t: LinOp
    kernel: List[np.ndarray]

    def shifted(self, coeffs: Dict[Tuple[int, int], object]) -> LinOp:
        """``t`` plus kernel vectors: ``coeffs[(basis_index, column)] = scale``."""
        data = self.t.data.astype(object).copy()
        for (b, col), s in coeffs.items():
            data[:, col] = data[:, col] + s * self.kernel[b]
        return LinOp(self.t.dim, 2, 1, data)


def solve_t_lift(sc: StructureConstants) -> TLift:
    """Solve ``(1 - sigma) t = C`` exactly; free variables are set to zero."""
    def make():
        M = -_sigma_minus_one(sc)
        try:
            t = exact_linalg.solve(M, sc.c.data.astype(object))
        except exact_linalg.NoSolution:
            raise NoSolution("C is not in the image of (1 - sigma); no t-lift exists") from None
        return TLift(LinOp(sc.n, 2, 1, t), exact_linalg.kernel(M))

    return sc.cached("t_lift", make)


# -- Jucys-Murphy components -----------------------------------------------------


def build_z(sc: StructureConstants, r: int) -> LinOp:
    """``Z_2 = C_1``; ``Z_{r+1} = C_r + sigma_r (Z_r (x) 1)``.

    ``Z_r`` maps ``r-1`` legs to ``r`` legs.
    """
    if r < 2:
        raise ValueError("Z_r is defined for r >= 2")

    def make():
        if r == 2:
            return sc.c
        prev = build_z(sc, r - 1)
        I1 = identity(sc.n, 1)
        return embed_at(sc.c, r - 1, r) + embed_at(sc.sigma, r - 1, r) @ kron(prev, I1)

    return sc.cached(("Z", r), make)


def build_z_explicit(sc: StructureConstants, r_plus_1: int) -> LinOp:
    """``Z_{r+1} = sum_k sigma_r ... sigma_{k+1} C_k`` with ``C_k`` on legs k, k+1."""
    r = r_plus_1 - 1
    total = None
    for k in range(1, r + 1):
        term = embed_at(sc.c, k, r + 1)
        for j in range(k + 1, r + 1):
            term = embed_at(sc.sigma, j, r + 1) @ term
        total = term if total is None else total + term
    return total


def z_from_jucys_murphy(sc: StructureConstants, r_plus_1: int) -> LinOp:
    """Block of ``J_{r+1}`` in the extended-R representation with the last
    in-leg fixed to the auxiliary index and every other leg a vector leg."""
    n = r_plus_1
    j = evaluate(build_jucys_murphy(n), sc.r_rep(), n)
    return project_block(j, (VECTOR,) * n, (VECTOR,) * (n - 1) + (AUX,))
