"""BRST operator: coefficients, right action on ghost polynomials, checks.

Ghost polynomials live in ``U (x) Lambda(gamma)``, where the wedge algebra
``Lambda`` is the tensor algebra modulo the kernel of ``A^T``.  A degree-n
wedge element is stored in expanded form ``A_{1->n}^T c`` for any
representative tensor ``c``; the basis monomial ``gamma_{j_1} ^ ... ^
gamma_{j_n}`` is the row of ``A_{1->n}`` at ``(j_1, ..., j_n)``.

``Q`` acts from the right.  Its ``Omega`` factors are right derivations on
the gamma tensor:

    gamma_b Omega^d = delta_bd - Omega^a (sigma^-1)^{cd}_{ab} gamma_c

and an ``Omega`` reaching the U coefficient gives zero.  Generators
``chi`` produced by ``Q`` are moved left through the remaining gammas with

    gamma_a chi_b = sigma^{cd}_{ab} chi_c gamma_d + C^c_{ab} gamma_c .

On representatives all of this is linear, so per degree ``n`` the action
is a pair of matrices: ``Q(a c) = a (L_n c) + sum_k a chi_k (K_{n,k} c)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exact_linalg
from .braid import (
    antisymmetrizer_op,
    build_f,
    build_shuffle,
    build_y,
    compute_height,
    evaluate,
    BraidElement,
)
from .ideal import add_into, reduce_mod_ideal
from .multilinear import (
    AUX,
    VECTOR,
    LinOp,
    embed_at,
    first_difference,
    identity,
    kron,
    project_block,
    ravel,
    unravel,
)
from .qlie import StructureConstants, build_z, solve_t_lift
from .report import VerificationReport

__all__ = [
    "LiftRequired",
    "BrstCoefficients",
    "GhostPolynomial",
    "GhostEngine",
    "build_brst_recursive",
    "build_brst_explicit",
    "compare_coefficients",
    "apply_q",
    "verify_closed_action",
    "verify_q_squared",
    "closed_action",
    "default_degree",
]


class LiftRequired(ValueError):
    pass


def default_degree(sc: StructureConstants, cap: int = 3, n_max: int = 5) -> int:
    """``min(height, cap)`` for the sigma representation."""
    h = compute_height(sc.sigma_rep(), n_max)
    return min(h.cap(cap), cap)


def _height_bound(sc: StructureConstants, r_max: int):
    return compute_height(sc.sigma_rep(), max(2, r_max + 2))


@dataclass
class BrstCoefficients:
    """Per-degree tensors ``(AXA)_r`` mapping r legs to r+1 legs."""

    n: int
    method: str
    axa: Dict[int, LinOp]
    height: Optional[int] = None
    vanishing_at_height: Optional[bool] = None
    notes: List[str] = field(default_factory=list)
    engines: dict = field(default_factory=dict, repr=False, compare=False)

    def degrees(self) -> List[int]:
        return sorted(self.axa)

    def get(self, r: int) -> LinOp:
        if r in self.axa:
            return self.axa[r]
        return LinOp.zeros(self.n, r + 1, r)

    def is_zero(self) -> bool:
        return all(op.is_zero() for op in self.axa.values())


def _descending_sigmas(sc: StructureConstants, r: int, legs: int, inverse: bool = False) -> LinOp:
    """``s_r s_{r-1} ... s_1`` on ``legs`` legs (optionally inverses)."""
    rep = sc.sigma_rep()
    word = tuple(range(r, 0, -1))
    if inverse:
        word = tuple(-x for x in word)
    return evaluate(BraidElement([(1, word)]), rep, legs)


def _r_max(sc: StructureConstants, r_max: int):
    h = _height_bound(sc, r_max)
    top = r_max if not h.finite else min(r_max, h.value - 1)
    return h, top


def build_brst_recursive(sc: StructureConstants, t: Optional[LinOp] = None, r_max: int = 3) -> BrstCoefficients:
    """``(XA)_1 = -t``; ``(XA)_r = ((-1)^r s_r...s_1 - 1)(1 (x) (XA)_{r-1})``;
    ``(AXA)_r = A_{1->r+1} (XA)_r``."""
    if t is None:
        try:
            t = solve_t_lift(sc).t
        except ArithmeticError as exc:
            raise LiftRequired(str(exc)) from None
    N = sc.n
    h, top = _r_max(sc, r_max)
    rep = sc.sigma_rep()
    axa: Dict[int, LinOp] = {}
    xa = -t
    for r in range(1, top + 1):
        if r > 1:
            step = _descending_sigmas(sc, r, r + 1).scale((-1) ** r) - identity(N, r + 1)
            xa = step @ kron(identity(N, 1), xa)
        axa[r] = antisymmetrizer_op(rep, r + 1) @ xa
    return BrstCoefficients(N, "recursive", axa, h.value)


def build_brst_explicit(sc: StructureConstants, r_max: int = 3) -> BrstCoefficients:
    """``(AXA)_r = (-1)^{r+1} [Y_{1->r+1}]_block A_{1->r}``, the block taken in
    the extended-R representation with the last in-leg auxiliary."""
    N = sc.n
    h, top = _r_max(sc, r_max)
    rrep, srep = sc.r_rep(), sc.sigma_rep()
    axa: Dict[int, LinOp] = {}

    def coefficient(r: int) -> LinOp:
        y = evaluate(build_y(1, r + 1), rrep, r + 1)
        blk = project_block(y, (VECTOR,) * (r + 1), (VECTOR,) * r + (AUX,))
        return (blk @ antisymmetrizer_op(srep, r)).scale((-1) ** (r + 1))

    for r in range(1, top + 1):
        axa[r] = coefficient(r)
    res = BrstCoefficients(N, "explicit", axa, h.value)
    if h.finite and r_max >= h.value:
        res.vanishing_at_height = coefficient(h.value).is_zero()
    return res


def compare_coefficients(a: BrstCoefficients, b: BrstCoefficients, label: str = "") -> VerificationReport:
    report = VerificationReport(f"BRST coefficients {a.method} vs {b.method}")
    for r in sorted(set(a.axa) | set(b.axa)):
        t0 = time.perf_counter()
        diff = first_difference(a.get(r), b.get(r))
        report.add("brst_constructions_agree", (label, r), diff is None, diff, time.perf_counter() - t0)
    return report


# -- ghost polynomials ----------------------------------------------------------


Key = Tuple[Tuple[int, ...], int]


class GhostPolynomial:
    """Sum of ``chi-word (x) expanded wedge tensor`` terms.

    ``terms`` maps ``(word, degree)`` to a vector of length ``N**degree``.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[Key, np.ndarray]] = None):
        self.n = n
        self.terms: Dict[Key, np.ndarray] = {}
        for key, v in (terms or {}).items():
            self._add(key, v)

    def _add(self, key: Key, v) -> None:
        v = np.asarray(v, dtype=object)
        if key in self.terms:
            v = self.terms[key] + v
        if any(x != 0 for x in v):
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def monomial(cls, engine: "GhostEngine", word: Sequence[int], indices: Sequence[int], coeff=1):
        n = len(indices)
        a = engine.antisym(n)
        row = a.data[ravel(indices, engine.n)] if n else np.array([1], dtype=object)
        p = cls(engine.n)
        p._add((tuple(word), n), np.asarray(row, dtype=object) * coeff)
        return p

    def __add__(self, other: "GhostPolynomial") -> "GhostPolynomial":
        out = GhostPolynomial(self.n, self.terms)
        for k, v in other.terms.items():
            out._add(k, v)
        return out

    def __neg__(self):
        return GhostPolynomial(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, GhostPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    def degrees(self):
        return sorted({n for _, n in self.terms})

    def __repr__(self):
        return f"GhostPolynomial({len(self.terms)} terms)"


def _e(N: int, a: int, b: int) -> LinOp:
    """Matrix unit ``e_a e_b^T`` as a one-leg operator."""
    m = np.zeros((N, N), dtype=np.int64)
    m[a, b] = 1
    return LinOp(N, 1, 1, m)


def _row_selector(N: int, d: int) -> LinOp:
    m = np.zeros((1, N), dtype=np.int64)
    m[0, d] = 1
    return LinOp(N, 0, 1, m)


class GhostEngine:
    """Per-degree matrices of the right action of Q on representatives."""

    def __init__(self, sc: StructureConstants, coeffs: Optional[BrstCoefficients] = None,
                 pieces: Optional[Sequence[int]] = None):
        self.sc = sc
        self.n = sc.n
        self.coeffs = coeffs
        N = self.n
        self.sinv = sc.sigma_rep().inverse
        self._omega: Dict[int, List[LinOp]] = {}
        self._xn: Dict[int, List[LinOp]] = {}
        self._xc: Dict[int, List[List[LinOp]]] = {}
        self._L: Dict[int, LinOp] = {}
        self._K: Dict[int, List[LinOp]] = {}
        self._Le: Dict[int, LinOp] = {}
        self._Ke: Dict[int, List[LinOp]] = {}
        self._ys: Dict[int, LinOp] = {}
        self._ginv: Dict[int, LinOp] = {}
        if coeffs is not None:
            for r in coeffs.degrees():
                if pieces is not None and r not in pieces:
                    continue
                axa = coeffs.get(r)
                if axa.is_zero():
                    continue
                self._ys[r] = self._lift_coefficient(r, axa)

    # building blocks ----------------------------------------------------------

    def antisym(self, n: int) -> LinOp:
        if n == 0:
            return identity(self.n, 0)
        return antisymmetrizer_op(self.sc.sigma_rep(), n)

    def _ginverse(self, n: int) -> LinOp:
        if n not in self._ginv:
            g = exact_linalg.generalized_inverse(self.antisym(n).data)
            self._ginv[n] = LinOp(self.n, n, n, g)
        return self._ginv[n]

    def _lift_coefficient(self, r: int, axa: LinOp) -> LinOp:
        """A tensor ``Y`` with ``A_{r+1} Y A_r = (AXA)_r``."""
        return self._ginverse(r + 1) @ axa @ self._ginverse(r)

    def omega(self, n: int) -> List[LinOp]:
        """``O[d]``: right action of ``Omega^d`` from degree n to n-1."""
        if n in self._omega:
            return self._omega[n]
        N = self.n
        sel = [_row_selector(N, d) for d in range(N)]
        if n == 1:
            out = sel
        else:
            prev = self.omega(n - 1)
            I = identity(N, n - 1)
            out = []
            for d in range(N):
                op = kron(I, sel[d])
                for a in range(N):
                    for k in range(N):
                        for c in range(N):
                            v = self.sinv.data[a * N + k, c * N + d]
                            if v:
                                op = op - kron(prev[a], _e(N, c, k)).scale(v)
                out.append(op)
        self._omega[n] = out
        return out

    def chi_moves(self, m: int):
        """``XN[b]`` (no chi left) and ``XC[b][x]`` (chi_x left) on degree m."""
        if m in self._xn:
            return self._xn[m], self._xc[m]
        N = self.n
        if m == 0:
            xn = [LinOp.zeros(N, 0, 0) for _ in range(N)]
            one = LinOp(N, 0, 0, [[1]])
            xc = [[one if b == x else LinOp.zeros(N, 0, 0) for x in range(N)] for b in range(N)]
        else:
            pn, pc = self.chi_moves(m - 1)
            s, C = self.sc.sigma.data, self.sc.c.data
            I = identity(N, m - 1)
            xn, xc = [], []
            for b in range(N):
                opn = LinOp.zeros(N, m, m)
                opc = [LinOp.zeros(N, m, m) for _ in range(N)]
                for k in range(N):
                    for c in range(N):
                        cv = C[k * N + b, c]
                        if cv:
                            opn = opn + kron(I, _e(N, c, k)).scale(cv)
                        for d in range(N):
                            sv = s[k * N + b, c * N + d]
                            if sv:
                                ekd = _e(N, d, k)
                                opn = opn + kron(pn[c], ekd).scale(sv)
                                for x in range(N):
                                    opc[x] = opc[x] + kron(pc[c][x], ekd).scale(sv)
                xn.append(opn)
                xc.append(opc)
        self._xn[m], self._xc[m] = xn, xc
        return xn, xc

    def _y_piece(self, r: int, n: int) -> Optional[LinOp]:
        y = self._ys.get(r)
        if y is None or n < r + 1:
            return None
        N = self.n
        total = None
        # js = (j_{r+1}, ..., j_1) in order of application
        chains = {(): identity(N, n)}
        deg = n
        for _ in range(r + 1):
            om = self.omega(deg)
            chains = {js + (d,): om[d] @ p for js, p in chains.items() for d in range(N)}
            deg -= 1
        for js, p in chains.items():
            row = ravel(tuple(reversed(js)), N)
            col = LinOp(N, r, 0, y.data[row].reshape(-1, 1))
            term = kron(p, col)
            total = term if total is None else total + term
        return total

    def matrices(self, n: int):
        """``(L_n, [K_{n,k}])`` acting on representatives of degree n."""
        if n in self._L:
            return self._L[n], self._K[n]
        N = self.n
        om = self.omega(n)
        xn, xc = self.chi_moves(n - 1)
        L = LinOp.zeros(N, n - 1, n)
        K = [LinOp.zeros(N, n - 1, n) for _ in range(N)]
        for i in range(N):
            L = L + xn[i] @ om[i]
            for k in range(N):
                K[k] = K[k] + xc[i][k] @ om[i]
        for r in sorted(self._ys):
            piece = self._y_piece(r, n)
            if piece is not None:
                L = L + piece
        self._L[n], self._K[n] = L, K
        return L, K

    def expanded_matrices(self, n: int):
        """The same action on expanded coefficients of degree n."""
        if n in self._Le:
            return self._Le[n], self._Ke[n]
        L, K = self.matrices(n)
        at = self.antisym(n - 1).transpose()
        g = self._ginverse(n).transpose()
        Le = at @ L @ g
        Ke = [at @ k @ g for k in K]
        self._Le[n], self._Ke[n] = Le, Ke
        return Le, Ke

    def well_defined(self, n: int) -> bool:
        """Q kills representatives of zero: ``A_{n-1}^T L_n`` and
        ``A_{n-1}^T K_{n,k}`` vanish on the kernel of ``A_n^T``."""
        L, K = self.matrices(n)
        at = self.antisym(n - 1).transpose()
        ker = exact_linalg.kernel(self.antisym(n).transpose().data)
        if not ker:
            return True
        basis = np.array(ker, dtype=object).T
        for op in [L] + list(K):
            prod = (at @ op).data.astype(object).dot(basis)
            if any(x != 0 for x in prod.flat):
                return False
        return True

    # action -------------------------------------------------------------------

    def apply(self, p: GhostPolynomial) -> GhostPolynomial:
        out = GhostPolynomial(self.n)
        for (word, n), v in p.terms.items():
            if n == 0:
                continue
            Le, Ke = self.expanded_matrices(n)
            out._add((word, n - 1), Le.data.astype(object).dot(v))
            for k in range(self.n):
                out._add((word + (k,), n - 1), Ke[k].data.astype(object).dot(v))
        return out


def _engine(sc: StructureConstants, coeffs: Optional[BrstCoefficients], pieces=None) -> GhostEngine:
    key = (sc.name, id(sc), tuple(pieces) if pieces is not None else None)
    store = coeffs.engines if coeffs is not None else sc._cache.setdefault("engines", {})
    if key not in store:
        store[key] = GhostEngine(sc, coeffs, pieces)
    return store[key]


def apply_q(sc: StructureConstants, coeffs: Optional[BrstCoefficients], p: GhostPolynomial) -> GhostPolynomial:
    return _engine(sc, coeffs).apply(p)


# -- closed action formula --------------------------------------------------------


def closed_action(sc: StructureConstants, engine: GhostEngine, word: Sequence[int],
                  indices: Sequence[int]) -> GhostPolynomial:
    """Action of the first two terms of Q on ``a gamma_{j_1} ^ ... ^ gamma_{j_n}``
    assembled from fbar, sigma^-1 strings, Z_n and the shuffle x^{(n-2)}_n."""
    N = sc.n
    n = len(indices)
    word = tuple(word)
    rep = sc.sigma_rep()
    out = GhostPolynomial(N)
    sign = (-1) ** (n - 1)
    fbar = evaluate(build_f("backward", 1, n), rep, n)
    j = ravel(indices, N)
    row = fbar.data[j]
    a_tail = engine.antisym(n - 1)
    for k in range(N**n):
        v = row[k]
        if not v:
            continue
        multi = unravel(k, N, n)
        tail = a_tail.data[ravel(multi[1:], N)] if n > 1 else np.array([1], dtype=object)
        out._add((word + (multi[0],), n - 1), np.asarray(tail, dtype=object) * (sign * v))
    if n >= 2:
        inv_all = _descending_sigmas_inv_ascending(sc, n - 1, n)
        inv_short = _descending_sigmas_inv_ascending(sc, n - 2, n)
        lin = (fbar @ inv_all @ build_z(sc, n)).scale(sign)
        x = evaluate(build_shuffle(n - 2, n), rep, n)
        lin = lin + x @ inv_all @ inv_short @ embed_at(sc.c, n - 1, n)
        rep_vec = np.asarray(lin.data[j], dtype=object)
        out._add((word, n - 1), a_tail.transpose().data.astype(object).dot(rep_vec))
    return out


def _descending_sigmas_inv_ascending(sc: StructureConstants, top: int, legs: int) -> LinOp:
    """``s_1^-1 s_2^-1 ... s_top^-1`` on ``legs`` legs."""
    word = tuple(-x for x in range(1, top + 1))
    return evaluate(BraidElement([(1, word)]), sc.sigma_rep(), legs)


def verify_closed_action(sc: StructureConstants, coeffs: BrstCoefficients, n_max: int = 3,
                         words: Optional[Sequence[Tuple[int, ...]]] = None) -> VerificationReport:
    report = VerificationReport(f"closed action formula for {sc.name}")
    engine = _engine(sc, coeffs, pieces=(1,))
    words = words if words is not None else [()]
    for n in range(1, n_max + 1):
        for word in words:
            t0 = time.perf_counter()
            bad = None
            for idx in product(range(sc.n), repeat=n):
                m = GhostPolynomial.monomial(engine, word, idx)
                lhs = engine.apply(m)
                rhs = closed_action(sc, engine, word, idx)
                if lhs != rhs:
                    bad = {"indices": [i + 1 for i in idx]}
                    break
            report.add("closed_action", (sc.name, n, _word_label(word)), bad is None, bad,
                       time.perf_counter() - t0)
    return report


def _word_label(word) -> str:
    return "1" if not word else "chi" + "".join(str(x + 1) for x in word)


# -- Q squared ----------------------------------------------------------------------


def verify_q_squared(sc: StructureConstants, coeffs: BrstCoefficients, n_max: int = 3) -> VerificationReport:
    """Q^2 on ``a gamma^n`` for a in {1, chi_i} vanishes modulo the ideal;
    for a = 1 the part linear in chi vanishes after rewriting the quadratic
    part with the relations."""
    report = VerificationReport(f"Q^2 = 0 for {sc.name}")
    engine = _engine(sc, coeffs)
    N = sc.n
    words = [()] + [(i,) for i in range(N)]
    t0 = time.perf_counter()
    ok = engine.apply(GhostPolynomial.monomial(engine, (), (0,))) == GhostPolynomial(
        N, {((0,), 0): np.array([1], dtype=object)})
    report.add("q_sign_convention", (sc.name,), ok, None, time.perf_counter() - t0)
    for n in range(1, n_max + 1):
        for word in words:
            t0 = time.perf_counter()
            bad = None
            linear_bad = None
            for idx in product(range(N), repeat=n):
                m = GhostPolynomial.monomial(engine, word, idx)
                q2 = engine.apply(engine.apply(m))
                res = _check_mod_ideal(sc, q2)
                if res is not None and bad is None:
                    bad = {"indices": [i + 1 for i in idx], **res}
                if not word and linear_bad is None:
                    lres = _check_mod_ideal(sc, q2, cap=2)
                    if lres is not None:
                        linear_bad = {"indices": [i + 1 for i in idx], **lres}
            sub = (sc.name, n, _word_label(word))
            report.add("q_squared", sub, bad is None, bad, time.perf_counter() - t0)
            if not word:
                report.add("q_squared_linear", sub, linear_bad is None, linear_bad, 0.0)
    return report


def _check_mod_ideal(sc: StructureConstants, p: GhostPolynomial, cap: Optional[int] = None):
    """None if every expanded component is in the ideal, else a witness."""
    comps: Dict[Tuple[int, int], Dict] = {}
    for (word, n), v in p.terms.items():
        for pos, x in enumerate(v):
            if x:
                add_into(comps.setdefault((n, pos), {}), word, x)
    for (n, pos), elem in sorted(comps.items()):
        if not elem:
            continue
        w = reduce_mod_ideal(sc, elem, cap=max(cap or 2, max(len(k) for k in elem)))
        if not w.member:
            return {"component": [n, pos], "residual": w.as_dict()["residual"]}
    return None
