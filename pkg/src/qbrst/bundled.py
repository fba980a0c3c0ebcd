"""Definitions of the bundled algebras, built from standard data.

Running ``python -m qbrst.bundled`` regenerates the JSON files in
``qbrst/data``; the tests check that the shipped files match.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence

from .scalars import Laurent, format_scalar

DATA_DIR = Path(__file__).resolve().parent / "data"


def _sigma_entry(i, j, k, l, v):
    # sigma^{kl}_{ij}, 1-based
    return [i, j, k, l, format_scalar(v)]


def permutation_doc(d: int, name: str = "") -> dict:
    """Flip on ``C^d`` with ``C = 0``."""
    sigma = [_sigma_entry(i, j, j, i, 1) for i in range(1, d + 1) for j in range(1, d + 1)]
    return {"name": name or f"perm{d}", "n": d, "field": "rational", "sigma": sigma, "c": [],
            "properties": ["sigma_involutive", "sigma_symmetric", "c_zero"]}


def super_permutation_entries(parities: Sequence[int]) -> List[list]:
    """``sigma^{mk}_{ij} = (-1)^{p_m p_k} delta^m_j delta^k_i``."""
    n = len(parities)
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            sign = (-1) ** (parities[i - 1] * parities[j - 1])
            out.append(_sigma_entry(i, j, j, i, sign))
    return out


def sl2_doc() -> dict:
    # basis h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
    brackets = {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}
    c = []
    for (i, j), out in brackets.items():
        for k, v in out.items():
            c.append([i, j, k, format_scalar(v)])
            c.append([j, i, k, format_scalar(-v)])
    c.sort()
    return {"name": "sl2", "n": 3, "field": "rational",
            "sigma": super_permutation_entries((0, 0, 0)), "c": c,
            "properties": ["sigma_involutive", "sigma_symmetric"]}


def gl11_doc() -> dict:
    # basis E11, E22, E12, E21 with parities 0, 0, 1, 1
    units = [(1, 1), (2, 2), (1, 2), (2, 1)]
    par = [0, 0, 1, 1]
    index = {u: n + 1 for n, u in enumerate(units)}
    c = []
    for x, (a, b) in enumerate(units):
        for y, (cc, d) in enumerate(units):
            res: Dict[int, int] = {}
            # [E_ab, E_cd} = delta_bc E_ad - (-1)^{p_x p_y} delta_da E_cb
            if b == cc:
                k = index[(a, d)]
                res[k] = res.get(k, 0) + 1
            if d == a:
                k = index[(cc, b)]
                res[k] = res.get(k, 0) - (-1) ** (par[x] * par[y])
            for k, v in sorted(res.items()):
                if v:
                    c.append([x + 1, y + 1, k, format_scalar(v)])
    grading = [[i + 1, i + 1, format_scalar((-1) ** p)] for i, p in enumerate(par)]
    return {"name": "gl11", "n": 4, "field": "rational",
            "sigma": super_permutation_entries(par), "c": c,
            "grading": grading, "parities": par,
            "properties": ["sigma_involutive", "sigma_symmetric"]}


def hecke2_doc() -> dict:
    # q^-1 times the Jimbo R-matrix of U_q(gl2) in braid form; eigenvalues 1, -q^-2
    qinv = Laurent({-1: 1})
    mixed = Laurent({0: 1, -2: -1})
    sigma = [
        _sigma_entry(1, 1, 1, 1, 1),
        _sigma_entry(2, 2, 2, 2, 1),
        _sigma_entry(1, 2, 2, 1, qinv),
        _sigma_entry(2, 1, 1, 2, qinv),
        _sigma_entry(2, 1, 2, 1, mixed),
    ]
    return {"name": "hecke2", "n": 2, "field": "laurent", "sigma": sigma, "c": [],
            "properties": ["sigma_symmetric", "c_zero"]}


def abelian1_doc() -> dict:
    return {"name": "abelian1", "n": 1, "field": "rational",
            "sigma": [_sigma_entry(1, 1, 1, 1, 1)], "c": [],
            "properties": ["sigma_involutive", "sigma_symmetric", "c_zero"]}


BUNDLED = {
    "sl2": sl2_doc,
    "gl11": gl11_doc,
    "hecke2": hecke2_doc,
    "abelian1": abelian1_doc,
}


def render(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def write_all(directory: Path = DATA_DIR) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for name, make in BUNDLED.items():
        (directory / f"{name}.json").write_text(render(make()))


if __name__ == "__main__":
    write_all()
