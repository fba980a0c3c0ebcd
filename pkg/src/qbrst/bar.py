"""Bar complex of the quantum Lie algebra at bounded degree.

A chain is a formal sum of slot tuples, each slot a free chi-word (the
empty word is the unit).  Boundary and homotopy act on free words; only
the comparisons at the end pass to the quotient, slot by slot, through
:func:`qbrst.ideal.reduce_mod_ideal`.
"""

from __future__ import annotations

import time
from itertools import product
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .braid import antisymmetrizer_op, build_f, evaluate
from .brst import BrstCoefficients, GhostEngine, GhostPolynomial, LiftRequired, _engine, _word_label
from .ideal import DegreeCapExceeded, IdealWitness, add_into, reducer_for, reduce_mod_ideal
from .multilinear import AUX, VECTOR, LinOp, embed_at, first_difference, identity, kron, project_block, unravel
from .qlie import StructureConstants, build_z, solve_t_lift
from .report import VerificationReport

__all__ = [
    "BarChain",
    "DegreeTooLow",
    "DegreeCapExceeded",
    "IdealWitness",
    "LiftRequired",
    "boundary",
    "homotopy",
    "antisymmetrize_chain",
    "chain_map_i",
    "build_w",
    "build_w_explicit",
    "build_w_from_r",
    "verify_w_identity",
    "verify_subcomplex",
    "verify_chain_map",
    "reduce_mod_ideal",
    "quotient_difference",
]

Word = Tuple[int, ...]
Slots = Tuple[Word, ...]


class DegreeTooLow(ValueError):
    pass


class BarChain:
    """Scalar-weighted sum of slot tuples of free chi-words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Slots, object]] = None):
        self.terms: Dict[Slots, object] = {}
        for k, c in (terms or {}).items():
            add_into(self.terms, tuple(tuple(w) for w in k), c)

    @classmethod
    def single(cls, *slots: Sequence[int], coeff=1) -> "BarChain":
        return cls({tuple(tuple(s) for s in slots): coeff})

    def add_term(self, slots: Slots, c) -> None:
        add_into(self.terms, slots, c)

    def __add__(self, other: "BarChain") -> "BarChain":
        out = BarChain(self.terms)
        for k, c in other.terms.items():
            out.add_term(k, c)
        return out

    def __neg__(self) -> "BarChain":
        return BarChain({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BarChain") -> "BarChain":
        return self + (-other)

    def scale(self, c) -> "BarChain":
        return BarChain({k: c * v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, BarChain):
            return NotImplemented
        return (self - other).is_zero()

    def degrees(self):
        return sorted({len(k) for k in self.terms})

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"BarChain({len(self.terms)} terms)"


def boundary(c: BarChain) -> BarChain:
    """``b(a_1 .. a_{n+1}) = sum_{i=1}^n (-1)^{n-i} (.. a_i a_{i+1} ..)``."""
    out = BarChain()
    for slots, coeff in c.terms.items():
        m = len(slots)
        if m < 2:
            raise DegreeTooLow(f"boundary needs at least two slots, got {m}")
        n = m - 1
        for i in range(1, n + 1):
            merged = slots[: i - 1] + (slots[i - 1] + slots[i],) + slots[i + 1:]
            out.add_term(merged, coeff if (n - i) % 2 == 0 else -coeff)
    return out


def homotopy(c: BarChain) -> BarChain:
    """Append the unit slot."""
    return BarChain({slots + ((),): coeff for slots, coeff in c.terms.items()})


def _transplant(out: BarChain, word: Word, vec, n: int, N: int, scale=1) -> None:
    for k, v in enumerate(vec):
        if v:
            tail = tuple((x,) for x in unravel(k, N, n)) if n else ()
            out.add_term((tuple(word),) + tail, scale * v)


def antisymmetrize_chain(sc: StructureConstants, word: Sequence[int], indices: Sequence[int]) -> BarChain:
    """``a (x) A_{1->n}(chi_{j_1} (x) ... (x) chi_{j_n})``."""
    n = len(indices)
    if n < 1:
        raise DegreeTooLow("antisymmetric chains need at least one generator")
    a = antisymmetrizer_op(sc.sigma_rep(), n)
    row = a.data[_ravel(indices, sc.n)]
    out = BarChain()
    _transplant(out, tuple(word), row, n, sc.n)
    return out


def _ravel(idx, N):
    r = 0
    for x in idx:
        r = r * N + x
    return r


def chain_map_i(sc: StructureConstants, p: GhostPolynomial) -> BarChain:
    """Expanded gamma coefficients moved onto single-generator chi slots."""
    out = BarChain()
    for (word, n), vec in p.terms.items():
        _transplant(out, word, vec, n, sc.n)
    return out


# -- quotient comparisons --------------------------------------------------------


def _normal_slot(sc, word: Word, cap: int) -> Dict[Word, object]:
    key = ("nf", cap, word)
    return sc.cached(key, lambda: reducer_for(sc, cap).normal_form({word: 1}))


def _rewrite_witness(sc, word: Word, cap: int) -> Optional[IdealWitness]:
    """Witness that ``word - nf(word)`` lies in the ideal (None if nf is trivial)."""
    def make():
        nf = _normal_slot(sc, word, cap)
        if nf == {word: 1}:
            return None
        diff = {word: 1}
        for u, x in nf.items():
            add_into(diff, u, -x)
        return reduce_mod_ideal(sc, diff, cap=cap)

    return sc.cached(("nfw", cap, word), make)


def quotient_difference(sc: StructureConstants, chain: BarChain, cap: Optional[int] = None):
    """Decide whether ``chain`` vanishes in ``U (x) U (x) ...``.

    Tail slots are replaced by normal forms, each rewrite certified by its
    own membership witness; the slot-1 element attached to each normalized
    tail is then decided with a membership witness.
    Returns ``(ok, witnesses, failure)``.
    """
    longest = max((len(w) for k in chain.terms for w in k), default=0)
    cap = max(2, longest) if cap is None else cap
    grouped: Dict[Slots, Dict[Word, object]] = {}
    rewritten = {w for k in chain.terms for w in k[1:]}
    witnesses = []
    for w in sorted(rewritten):
        rw = _rewrite_witness(sc, w, cap)
        if rw is None:
            continue
        witnesses.append(rw)
        if not rw.member:  # the reducer and its normal form disagree
            return False, witnesses, {"tail_word": [x + 1 for x in w], **rw.as_dict()}
    for slots, c in chain.terms.items():
        tails = [()]
        weights = [1]
        for w in slots[1:]:
            nf = _normal_slot(sc, w, cap)
            tails2, weights2 = [], []
            for t, wt in zip(tails, weights):
                for u, x in nf.items():
                    tails2.append(t + (u,))
                    weights2.append(wt * x)
            tails, weights = tails2, weights2
        for t, wt in zip(tails, weights):
            add_into(grouped.setdefault(t, {}), slots[0], c * wt)
    for tail in sorted(grouped):
        elem = grouped[tail]
        if not elem:
            continue
        w = reduce_mod_ideal(sc, elem, cap=cap)
        witnesses.append(w)
        if not w.member:
            return False, witnesses, {"tail": [[x + 1 for x in u] for u in tail], **w.as_dict()}
    return True, witnesses, None


# -- W tensors --------------------------------------------------------------------


def build_w(sc: StructureConstants, n: int) -> LinOp:
    """``W_2 = C``; ``W_{n+1} = Z_{n+1} - W_n (x) 1``.  Maps n-1 legs to n legs."""
    if n < 2:
        raise ValueError("W_n is defined for n >= 2")

    def make():
        if n == 2:
            return sc.c
        return build_z(sc, n) - kron(build_w(sc, n - 1), identity(sc.n, 1))

    return sc.cached(("W", n), make)


def build_w_explicit(sc: StructureConstants, n_plus_1: int) -> LinOp:
    """``W_{n+1} = sum_k (-1)^k fbar_{n-k+1 -> n+1} C_{n-k} (x) 1^k``."""
    n = n_plus_1 - 1
    rep = sc.sigma_rep()
    total = None
    for k in range(n):
        lo = n - k + 1
        fb = evaluate(build_f("backward", lo, n + 1), rep, n + 1) if lo < n + 1 else identity(sc.n, n + 1)
        term = (fb @ embed_at(sc.c, n - k, n + 1)).scale((-1) ** k)
        total = term if total is None else total + term
    return total


def build_w_from_r(sc: StructureConstants, n_plus_1: int) -> LinOp:
    """``(-1)^n`` times the block of ``(fbar_{1->n+1} - 1) R_1 ... R_n`` in the
    extended-R representation, last in-leg auxiliary."""
    n = n_plus_1 - 1
    rep = sc.r_rep()
    from .braid import BraidElement

    word = BraidElement([(1, tuple(range(1, n + 1)))])
    op = evaluate((build_f("backward", 1, n + 1) - BraidElement.one()) * word, rep, n + 1)
    return project_block(op, (VECTOR,) * (n + 1), (VECTOR,) * n + (AUX,)).scale((-1) ** n)


def _t_sum(t: LinOp, n: int) -> LinOp:
    """``sum_k (-1)^{n-k} 1^{k-1} (x) t (x) 1^{n-k}``, n legs to n+1."""
    total = None
    for k in range(1, n + 1):
        term = embed_at(t, k, n + 1).scale((-1) ** (n - k))
        total = term if total is None else total + term
    return total


def _lift(sc, t):
    if t is not None:
        return t, []
    try:
        lift = solve_t_lift(sc)
    except ArithmeticError as exc:
        raise LiftRequired(str(exc)) from None
    return lift.t, [lift.shifted({(b, b % sc.n): 1}) for b in range(len(lift.kernel))]


def verify_w_identity(sc: StructureConstants, t: Optional[LinOp] = None, n_max: int = 3) -> VerificationReport:
    """``A_{1->n+1} (sum_k (-1)^{n-k} t_k) = W_{n+1} A_{1->n}``, the W
    routes against each other, and independence of the chosen lift."""
    report = VerificationReport(f"W identity for {sc.name}")
    t, shifted = _lift(sc, t)
    rep = sc.sigma_rep()
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        w = build_w(sc, n + 1)
        rhs = w @ antisymmetrizer_op(rep, n)
        lhs = antisymmetrizer_op(rep, n + 1) @ _t_sum(t, n)
        report.add("w_identity", (sc.name, n), lhs == rhs, first_difference(lhs, rhs), time.perf_counter() - t0)
        t0 = time.perf_counter()
        d1 = first_difference(w, build_w_explicit(sc, n + 1))
        d2 = first_difference(w, build_w_from_r(sc, n + 1))
        report.add("w_routes_agree", (sc.name, n + 1), d1 is None and d2 is None, d1 or d2,
                   time.perf_counter() - t0)
        for i, ts in enumerate(shifted):
            t0 = time.perf_counter()
            other = antisymmetrizer_op(rep, n + 1) @ _t_sum(ts, n)
            report.add("w_lift_independent", (sc.name, n, i + 1), other == rhs,
                       first_difference(other, rhs), time.perf_counter() - t0)
    return report


# -- Prop: the antisymmetric chains form a subcomplex -------------------------------


def _words(sc: StructureConstants):
    return [()] + [(i,) for i in range(sc.n)]


def verify_subcomplex(sc: StructureConstants, t: Optional[LinOp] = None, n_max: int = 3) -> VerificationReport:
    """For antisymmetric chains with ``n+1 <= n_max + 1`` generators:

        b(a A_{n+1} chi..) = (-1)^n [a chi (x) fbar_{1->n+1}(1 (x) A_{2->n+1}) chi..]
                             + a (x) (W_{n+1} A_{1->n}) chi..

    in ``U (x) U^{(x) n}``; the first term keeps single-generator tails.
    """
    _lift(sc, t)  # the statement presupposes a lift
    report = VerificationReport(f"antisymmetric subcomplex for {sc.name}")
    N = sc.n
    rep = sc.sigma_rep()
    for n in range(1, n_max + 1):
        a_n = antisymmetrizer_op(rep, n)
        fb = evaluate(build_f("backward", 1, n + 1), rep, n + 1) @ kron(identity(N, 1), a_n)
        wa = build_w(sc, n + 1) @ a_n
        for word in _words(sc):
            t0 = time.perf_counter()
            bad = None
            for idx in product(range(N), repeat=n + 1):
                j = _ravel(idx, N)
                lhs = boundary(antisymmetrize_chain(sc, word, idx))
                rhs = BarChain()
                sign = (-1) ** n
                for k, v in enumerate(fb.data[j]):
                    if v:
                        multi = unravel(k, N, n + 1)
                        rhs.add_term((word + (multi[0],),) + tuple((x,) for x in multi[1:]), sign * v)
                _transplant(rhs, word, wa.data[j], n, N)
                ok, _, fail = quotient_difference(sc, lhs - rhs)
                if not ok:
                    bad = {"indices": [x + 1 for x in idx], **fail}
                    break
            report.add("subcomplex", (sc.name, n + 1, _word_label(word)), bad is None, bad,
                       time.perf_counter() - t0)
    return report


def verify_chain_map(sc: StructureConstants, coeffs: BrstCoefficients, n_max: int = 3) -> VerificationReport:
    """``b i = i Q`` on ``a gamma_{j_1} ^ ... ^ gamma_{j_n}`` modulo the ideal."""
    sc.sigma_rep().inverse
    report = VerificationReport(f"chain map for {sc.name}")
    engine = _engine(sc, coeffs)
    N = sc.n
    for n in range(1, n_max + 1):
        for word in _words(sc):
            t0 = time.perf_counter()
            bad = None
            certified = 0
            for idx in product(range(N), repeat=n):
                m = GhostPolynomial.monomial(engine, word, idx)
                diff = boundary(chain_map_i(sc, m)) - chain_map_i(sc, engine.apply(m))
                ok, wits, fail = quotient_difference(sc, diff)
                if ok and not all(w.check(sc) for w in wits):
                    ok, fail = False, {"reason": "witness does not re-expand to its element"}
                if not ok:
                    bad = {"indices": [x + 1 for x in idx], **fail}
                    break
                certified += sum(1 for w in wits if w.terms)
            report.add("chain_map", (sc.name, n, _word_label(word)), bad is None, bad,
                       time.perf_counter() - t0, "" if bad else f"{certified} witnesses")
    return report
