"""Membership in the two-sided ideal of the quantum Lie algebra relations.

The relators are

    g_ij = chi_i chi_j - sigma^{kl}_{ij} chi_k chi_l - C^k_{ij} chi_k .

Elements of the free algebra are dicts ``{word: scalar}`` with words as
tuples of 0-based generator indices.  Membership is decided at bounded
degree: an element of degree <= L lies in the ideal (at cap L) when it is
a combination of the products ``u g_ij v`` with ``|u| + |v| <= L - 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

from . import exact_linalg
from .exact_linalg import LAURENT, RATIONAL, _rref_rows
from .scalars import format_scalar

__all__ = [
    "DegreeCapExceeded",
    "IdealWitness",
    "IdealReducer",
    "relator",
    "reducer_for",
    "reduce_mod_ideal",
    "add_into",
    "mul_words",
]

Word = Tuple[int, ...]
Element = Dict[Word, object]


class DegreeCapExceeded(ValueError):
    pass


def add_into(acc: Element, word: Word, c) -> None:
    if not c:
        return
    v = acc.get(word, 0) + c
    if v:
        acc[word] = v
    else:
        acc.pop(word, None)


def mul_words(left: Word, elem: Element, right: Word = ()) -> Element:
    out: Element = {}
    for w, c in elem.items():
        add_into(out, left + w + right, c)
    return out


def relator(sc, i: int, j: int) -> Element:
    N = sc.n
    g: Element = {}
    add_into(g, (i, j), 1)
    srow = sc.sigma.data[i * N + j]
    for kl in range(N * N):
        v = srow[kl]
        if v:
            k, l = divmod(kl, N)
            add_into(g, (k, l), -v)
    crow = sc.c.data[i * N + j]
    for k in range(N):
        if crow[k]:
            add_into(g, (k,), -crow[k])
    return g


@dataclass
class IdealWitness:
    """``element - residual = sum coeff * u g_ij v``.

    ``terms`` holds ``(u, (i, j), v, coeff)``; membership holds when the
    residual is empty.
    """

    element: Element
    terms: List[Tuple[Word, Tuple[int, int], Word, object]]
    residual: Element
    cap: int

    @property
    def member(self) -> bool:
        return not self.residual

    def expand(self, sc) -> Element:
        """Re-expand the combination (over the elimination field)."""
        fld = LAURENT if sc.is_laurent else RATIONAL
        out: Element = {}
        for u, (i, j), v, c in self.terms:
            for w, x in mul_words(u, relator(sc, i, j), v).items():
                add_into(out, w, fld.to(x) * c)
        return out

    def check(self, sc) -> bool:
        fld = LAURENT if sc.is_laurent else RATIONAL
        target: Element = {}
        for w, x in self.element.items():
            add_into(target, w, fld.to(x))
        for w, x in self.residual.items():
            add_into(target, w, -fld.to(x))
        got = self.expand(sc)
        keys = set(target) | set(got)
        return all(target.get(k, 0) == got.get(k, 0) for k in keys)

    def as_dict(self) -> dict:
        return {
            "member": self.member,
            "cap": self.cap,
            "terms": [[list(u), [i + 1, j + 1], list(v), _fmt(c)] for u, (i, j), v, c in self.terms],
            "residual": {" ".join(str(x + 1) for x in w) or "1": _fmt(c)
                         for w, c in sorted(self.residual.items())},
        }


def _fmt(c) -> str:
    try:
        return format_scalar(c)
    except (TypeError, ValueError):
        return str(c)


class IdealReducer:
    """Row-reduced spanning set of the ideal up to word length ``cap``."""

    def __init__(self, sc, cap: int):
        if cap < 0:
            raise ValueError("degree cap must be non-negative")
        self.sc = sc
        self.cap = cap
        self.field = LAURENT if sc.is_laurent else RATIONAL
        N = sc.n
        words: List[Word] = []
        for length in range(cap, -1, -1):
            words.extend(sorted(product(range(N), repeat=length), reverse=True))
        self.words = words
        self.col = {w: i for i, w in enumerate(words)}
        gens = []
        rels = {(i, j): relator(sc, i, j) for i in range(N) for j in range(N)}
        for total in range(0, max(cap - 2, -1) + 1):
            for lu in range(total + 1):
                for u in product(range(N), repeat=lu):
                    for v in product(range(N), repeat=total - lu):
                        for (i, j), g in rels.items():
                            if g:
                                gens.append((u, (i, j), v))
        self.gens = gens
        fld = self.field
        rows = []
        for u, ij, v in gens:
            row = [fld.zero()] * len(words)
            for w, c in mul_words(u, rels[ij], v).items():
                row[self.col[w]] = fld.to(c)
            rows.append(row)
        aug = [[fld.one() if a == b else fld.zero() for b in range(len(gens))] for a in range(len(gens))]
        self.pivots = _rref_rows(rows, fld, aug=aug) if rows else []
        self.rows = rows[: len(self.pivots)]
        self.aug = aug[: len(self.pivots)]

    def reduce(self, element: Element) -> IdealWitness:
        fld = self.field
        vec = [fld.zero()] * len(self.words)
        for w, c in element.items():
            if len(w) > self.cap:
                raise DegreeCapExceeded(f"word of length {len(w)} exceeds cap {self.cap}")
            vec[self.col[w]] = vec[self.col[w]] + fld.to(c)
        combo = [fld.zero()] * len(self.gens)
        for r, pc in enumerate(self.pivots):
            f = vec[pc]
            if not f:
                continue
            row = self.rows[r]
            for j, x in enumerate(row):
                if x:
                    vec[j] = vec[j] - f * x
            for j, x in enumerate(self.aug[r]):
                if x:
                    combo[j] = combo[j] + f * x
        residual: Element = {}
        for j, x in enumerate(vec):
            if x:
                residual[self.words[j]] = _back(fld, x)
        terms = [(u, ij, v, c) for (u, ij, v), c in zip(self.gens, combo) if c]
        return IdealWitness(dict(element), terms, residual, self.cap)

    def normal_form(self, element: Element) -> Element:
        return self.reduce(element).residual


def _back(fld, x):
    try:
        return fld.back(x)
    except ArithmeticError:
        return x


def reducer_for(sc, cap: int) -> IdealReducer:
    return sc.cached(("ideal", cap), lambda: IdealReducer(sc, cap))


def reduce_mod_ideal(sc, element: Element, cap: Optional[int] = None) -> IdealWitness:
    """Decide membership of ``element`` at word-length cap ``cap``."""
    longest = max((len(w) for w in element), default=0)
    if cap is None:
        cap = max(longest, 2)
    if longest > cap:
        raise DegreeCapExceeded(f"word of length {longest} exceeds cap {cap}")
    return reducer_for(sc, cap).reduce(element)
