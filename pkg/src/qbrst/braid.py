"""Braid group algebra elements and their evaluation in representations.

A :class:`BraidElement` is a formal combination of braid words.  Word
letters are nonzero integers: ``i`` stands for the generator ``s_i`` and
``-i`` for its inverse.  Elements are never compared formally; identities
are checked after evaluation in a :class:`Representation`, where ``s_i``
acts on legs ``i, i+1``.
"""

from __future__ import annotations

import time
from fractions import Fraction
from functools import lru_cache
from math import gcd
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels, exact_linalg
from .multilinear import (
    LinOp,
    as_exact_array,
    first_difference,
    identity,
    kron,
    laurent_join,
    laurent_split,
)
from .report import VerificationReport
from .scalars import Laurent, normalize

__all__ = [
    "BraidError",
    "BadRange",
    "StrandOverflow",
    "MissingInverse",
    "BraidElement",
    "Representation",
    "Height",
    "generator",
    "build_f",
    "build_antisymmetrizer",
    "build_antisymmetrizer_bar",
    "build_shuffle",
    "build_shuffle_permutations",
    "build_y",
    "build_y_zagier",
    "build_jucys_murphy",
    "evaluate",
    "antisymmetrizer_op",
    "compute_height",
    "verify_braid_suite",
]

Word = Tuple[int, ...]


class BraidError(ValueError):
    pass


class BadRange(BraidError):
    pass


class StrandOverflow(BraidError):
    pass


class MissingInverse(BraidError):
    pass


class BraidElement:
    """Formal sum of scalar-weighted braid words (immutable).

    Words are kept as given apart from merging coefficients of identical
    words and dropping zero coefficients.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[Tuple[object, Sequence[int]]] = ()):
        acc: Dict[Word, object] = {}
        for c, w in terms:
            w = tuple(int(x) for x in w)
            if any(x == 0 for x in w):
                raise BadRange("generator index 0 does not exist")
            acc[w] = acc.get(w, 0) + c
        self._terms = {w: normalize(c) for w, c in acc.items() if c}

    @classmethod
    def one(cls) -> "BraidElement":
        return cls([(1, ())])

    @classmethod
    def zero(cls) -> "BraidElement":
        return cls()

    @property
    def terms(self) -> List[Tuple[object, Word]]:
        return [(c, w) for w, c in sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0]))]

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other) -> bool:
        """Equality of formal sums of words (not of their images)."""
        if isinstance(other, BraidElement):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def max_index(self) -> int:
        return max((abs(x) for w in self._terms for x in w), default=0)

    def __add__(self, other: "BraidElement") -> "BraidElement":
        other = _as_element(other)
        return BraidElement([(c, w) for w, c in self._terms.items()]
                            + [(c, w) for w, c in other._terms.items()])

    __radd__ = __add__

    def __neg__(self) -> "BraidElement":
        return BraidElement([(-c, w) for w, c in self._terms.items()])

    def __sub__(self, other: "BraidElement") -> "BraidElement":
        return self + (-_as_element(other))

    def __rsub__(self, other):
        return _as_element(other) - self

    def __mul__(self, other) -> "BraidElement":
        if not isinstance(other, BraidElement):
            return BraidElement([(c * other, w) for w, c in self._terms.items()])
        return BraidElement([
            (c1 * c2, w1 + w2)
            for w1, c1 in self._terms.items()
            for w2, c2 in other._terms.items()
        ])

    def __rmul__(self, c) -> "BraidElement":
        return BraidElement([(c * v, w) for w, v in self._terms.items()])

    def shift(self, k: int) -> "BraidElement":
        """Index shift ``s_i -> s_{i+k}`` (conjugation by the shift ``T_k``)."""
        return BraidElement([
            (c, tuple(x + k if x > 0 else x - k for x in w)) for w, c in self._terms.items()
        ])

    def __repr__(self):
        if not self._terms:
            return "BraidElement(0)"
        parts = []
        for c, w in self.terms:
            word = "*".join(f"s{x}" if x > 0 else f"s{-x}^-1" for x in w) or "1"
            parts.append(f"{c}*{word}")
        return "BraidElement(" + " + ".join(parts) + ")"


def _as_element(x) -> BraidElement:
    if isinstance(x, BraidElement):
        return x
    return BraidElement([(x, ())])


def generator(i: int, inverse: bool = False) -> BraidElement:
    if i < 1:
        raise BadRange(f"generator index must be positive, got {i}")
    return BraidElement([(1, (-i if inverse else i,))])


def _word(indices: Iterable[int]) -> BraidElement:
    return BraidElement([(1, tuple(indices))])


# -- builders -----------------------------------------------------------------


def build_f(direction: str, k: int, m: int) -> BraidElement:
    """``f_{k->m}`` (forward) or ``fbar_{k->m}`` (backward).

    forward:  1 - s_{m-1} + s_{m-2}s_{m-1} - ... (+/-) s_k...s_{m-1}
    backward: 1 - s_k + s_{k+1}s_k - ... (+/-) s_{m-1}...s_k
    """
    if k < 1 or m < k:
        raise BadRange(f"need 1 <= k <= m, got k={k}, m={m}")
    terms = [(1, ())]
    for j in range(1, m - k + 1):
        if direction == "forward":
            w = tuple(range(m - j, m))
        elif direction == "backward":
            w = tuple(range(k + j - 1, k - 1, -1))
        else:
            raise ValueError(f"direction must be forward or backward, got {direction!r}")
        terms.append(((-1) ** j, w))
    return BraidElement(terms)


@lru_cache(maxsize=None)
def _antisym(n: int) -> BraidElement:
    if n == 1:
        return BraidElement.one()
    return build_f("forward", 1, n) * _antisym(n - 1)


def build_antisymmetrizer(n: int, start: int = 1) -> BraidElement:
    """``A_{start->start+n-1}`` via ``A_{1->n} = f_{1->n} A_{1->n-1}``."""
    if n < 1 or start < 1:
        raise BadRange(f"antisymmetrizer needs n >= 1 and start >= 1, got {n}, {start}")
    return _antisym(n).shift(start - 1)


@lru_cache(maxsize=None)
def _antisym_bar(n: int) -> BraidElement:
    if n == 1:
        return BraidElement.one()
    return build_f("backward", 1, n) * _antisym_bar(n - 1).shift(1)


def build_antisymmetrizer_bar(n: int, start: int = 1) -> BraidElement:
    """The same antisymmetrizer via ``A_{1->n} = fbar_{1->n} A_{2->n}``."""
    if n < 1 or start < 1:
        raise BadRange(f"antisymmetrizer needs n >= 1 and start >= 1, got {n}, {start}")
    return _antisym_bar(n).shift(start - 1)


@lru_cache(maxsize=None)
def build_shuffle(m: int, n: int) -> BraidElement:
    """Quantum shuffle ``x^{(m)}_n``.

    ``x^{(0)}_n = x^{(n)}_n = 1`` and
    ``x^{(k)}_{n+1} = x^{(k-1)}_n - (-1)^{k-1} x^{(k)}_n s_n s_{n-1} ... s_{n-k+1}``.
    """
    if not 0 <= m <= n:
        raise BadRange(f"need 0 <= m <= n, got m={m}, n={n}")
    if m == 0 or m == n:
        return BraidElement.one()
    prev = n - 1
    tail = _word(range(prev, prev - m, -1))
    return build_shuffle(m - 1, prev) - ((-1) ** (m - 1)) * (build_shuffle(m, prev) * tail)


def _bubble_word(perm: Sequence[int]) -> Tuple[int, ...]:
    """A reduced word for ``perm`` read off from adjacent-swap sorting."""
    w = list(perm)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i + 1)
                changed = True
                break
    return tuple(word)


@lru_cache(maxsize=None)
def build_shuffle_permutations(m: int, n: int) -> BraidElement:
    """``x^{(m)}_n`` as a signed sum over minimal coset representatives.

    Sums ``(-1)^{len} s_w`` over permutations ``w`` whose inverse is
    increasing on the first ``n-m`` and on the last ``m`` positions.
    Independent of the recursion in :func:`build_shuffle`.
    """
    if not 0 <= m <= n:
        raise BadRange(f"need 0 <= m <= n, got m={m}, n={n}")
    terms = []
    for w in permutations(range(n)):
        inv = [0] * n
        for pos, val in enumerate(w):
            inv[val] = pos
        head, tail = inv[: n - m], inv[n - m:]
        if head == sorted(head) and tail == sorted(tail):
            word = _bubble_word(w)
            terms.append(((-1) ** len(word), word))
    return BraidElement(terms)


def build_y(k: int, r_plus_1: int) -> BraidElement:
    """``Y_{k->r+1} = prod_{s=r..k} (1 - (-1)^{r-s} s_s ... s_{r-1} s_r^2)``."""
    r = r_plus_1 - 1
    if k < 1 or k > r_plus_1:
        raise BadRange(f"need 1 <= k <= r+1, got k={k}, r+1={r_plus_1}")
    out = BraidElement.one()
    for s in range(r, k - 1, -1):
        w = tuple(range(s, r)) + (r, r)
        out = out * (BraidElement.one() - ((-1) ** (r - s)) * _word(w))
    return out


def build_y_zagier(k: int, r_plus_1: int) -> BraidElement:
    """Factorized form ``prod_{s=r..k} (1 + (-1)^{r-s} s_s...s_r) f_{k->r+1}``."""
    r = r_plus_1 - 1
    if k < 1 or k > r_plus_1:
        raise BadRange(f"need 1 <= k <= r+1, got k={k}, r+1={r_plus_1}")
    out = BraidElement.one()
    for s in range(r, k - 1, -1):
        out = out * (BraidElement.one() + ((-1) ** (r - s)) * _word(range(s, r + 1)))
    return out * build_f("forward", k, r_plus_1)


def build_jucys_murphy(r: int) -> BraidElement:
    """``J_1 = 1``, ``J_{r+1} = s_r J_r s_r``."""
    if r < 1:
        raise BadRange(f"Jucys-Murphy index must be positive, got {r}")
    w: Tuple[int, ...] = ()
    for j in range(1, r):
        w = (j,) + w + (j,)
    return _word(w)


def _descending(a: int, b: int) -> BraidElement:
    """The single word ``s_a s_{a-1} ... s_b`` (empty when a < b)."""
    return _word(range(a, b - 1, -1))


# -- representations ----------------------------------------------------------


class Representation:
    """Braid group acting on tensor powers of a ``dim``-dimensional space."""

    def __init__(self, gen: LinOp, inverse: Optional[LinOp] = None, name: str = "",
                 check: bool = False):
        if gen.out_legs != 2 or gen.in_legs != 2:
            raise BraidError("generator image must be a 2-leg to 2-leg operator")
        self.gen = gen
        self.dim = gen.dim
        self.name = name
        self._inverse = inverse
        self._inverse_tried = inverse is not None
        self._a_cache: Dict[int, LinOp] = {}
        self._stacks: Dict[bool, dict] = {}
        if check and not self.braid_relation_holds():
            raise BraidError("generator image violates the braid relation")

    @property
    def inverse(self) -> LinOp:
        if not self._inverse_tried:
            self._inverse_tried = True
            try:
                inv = exact_linalg.inverse(self.gen.data)
                self._inverse = LinOp(self.dim, 2, 2, inv)
            except (exact_linalg.SingularMatrix, ArithmeticError):
                self._inverse = None
        if self._inverse is None:
            raise MissingInverse(f"generator of representation {self.name or '?'} is not invertible")
        return self._inverse

    def has_inverse(self) -> bool:
        try:
            self.inverse
        except MissingInverse:
            return False
        return True

    def braid_relation_holds(self) -> bool:
        lhs = evaluate(_word((1, 2, 1)), self, 3)
        rhs = evaluate(_word((2, 1, 2)), self, 3)
        return lhs == rhs

    def letter(self, x: int) -> LinOp:
        return self.gen if x > 0 else self.inverse

    def letter_stack(self, x: int) -> dict:
        """Generator image as ``{(e, den): M}`` with ``image = sum q^e M / den``.

        Rational slices are cleared of denominators so that the integer
        kernels apply; ``den`` is 1 when there is nothing to clear.
        """
        key = x > 0
        if key not in self._stacks:
            self._stacks[key] = {(e, den): m for e, sl in laurent_split(self.letter(x).data).items()
                                 for den, m in (_clear_denominators(sl),)}
        return self._stacks[key]

    def __repr__(self):
        return f"Representation({self.name or 'unnamed'}, dim={self.dim})"


def evaluate(e: BraidElement, rep: Representation, n: int, backend: Optional[str] = None) -> LinOp:
    """Evaluate ``e`` on ``n`` legs.

    Words are applied right to left onto the identity; words are walked as
    a trie of reversed words so common suffixes are computed once.
    """
    e = _as_element(e)
    if e.max_index() > n - 1:
        raise StrandOverflow(f"generator index {e.max_index()} needs more than {n} legs")
    if any(x < 0 for _, w in e.terms for x in w):
        rep.inverse  # raises MissingInverse early
    trie: dict = {}
    for c, w in e.terms:
        node = trie
        for x in reversed(w):
            node = node.setdefault(x, {})
        node[None] = node.get(None, 0) + c
    d = rep.dim
    start = {(0, 1): np.eye(d**n, dtype=np.int64)}
    acc: dict = {}

    def apply(x: int, target: dict) -> dict:
        k = abs(x)
        pre, post = d ** (k - 1), d ** (n - k - 1)
        out: dict = {}
        for (eg, dg), g in rep.letter_stack(x).items():
            for (et, dt), t in target.items():
                res = _kernels.apply_local(g, t.reshape(pre, d * d, post * d**n), backend=backend)
                _stack_add(out, (eg + et, dg * dt), res.reshape(d**n, d**n))
        return out

    def add(target: dict, c):
        citems = c.items() if isinstance(c, Laurent) else ((0, c),)
        for ec, cv in citems:
            cv = Fraction(cv)
            num = normalize(cv.numerator)
            for (et, dt), t in target.items():
                term = t if num == 1 else LinOp(d, n, n, t).scale(num).data
                _stack_add(acc, (ec + et, dt * cv.denominator), term)

    stack = [(trie, start)]
    while stack:
        node, op = stack.pop()
        for key in sorted(node, key=lambda k: (k is not None, k or 0), reverse=True):
            child = node[key]
            if key is None:
                if child:
                    add(op, child)
                continue
            stack.append((child, apply(key, op)))
    return _stack_to_linop(acc, d, n)


def _stack_add(acc: dict, e: int, m: np.ndarray):
    if e in acc:
        acc[e] = _madd(acc[e], m)
    else:
        acc[e] = m


def _madd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == np.int64 and b.dtype == np.int64:
        lim = 2**62
        if int(np.abs(a).max(initial=0)) < lim and int(np.abs(b).max(initial=0)) < lim:
            return a + b
    return a.astype(object) + b.astype(object)


def _mscale(a: np.ndarray, k: int) -> np.ndarray:
    if a.dtype == np.int64 and int(np.abs(a).max(initial=0)) < 2**62 // k:
        return a * k
    return a.astype(object) * k


def _clear_denominators(m: np.ndarray):
    """``(den, M')`` with ``m = M' / den`` and ``M'`` integral when possible."""
    if m.dtype != object:
        return 1, m
    den = 1
    for x in m.flat:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    if den == 1:
        return 1, as_exact_array(m)
    return den, as_exact_array(np.vectorize(lambda x: normalize(x * den), otypes=[object])(m))


def _stack_to_linop(acc: dict, d: int, n: int) -> LinOp:
    by_exp: dict = {}
    for (e, den), m in acc.items():
        by_exp.setdefault(e, []).append((den, m))
    merged = {}
    for e, parts in by_exp.items():
        common = 1
        for den, _ in parts:
            common = common * den // gcd(common, den)
        total = None
        for den, m in parts:
            scaled = m if den == common else _mscale(m, common // den)
            total = scaled if total is None else _madd(total, scaled)
        if common != 1:
            total = as_exact_array(np.vectorize(lambda x: normalize(Fraction(int(x), common)),
                                                otypes=[object])(total))
        merged[e] = total
    acc = {e: m for e, m in merged.items() if (m != 0).any()}
    if not acc:
        return LinOp.zeros(d, n, n)
    if set(acc) == {0}:
        return LinOp(d, n, n, acc[0])
    return LinOp(d, n, n, laurent_join(acc, (d**n, d**n)))


def antisymmetrizer_op(rep: Representation, n: int) -> LinOp:
    """``A_{1->n}`` evaluated recursively as ``F_n (A_{n-1} (x) 1)``."""
    if n < 1:
        raise BadRange("antisymmetrizer needs n >= 1")
    if n in rep._a_cache:
        return rep._a_cache[n]
    if n == 1:
        op = identity(rep.dim, 1)
    else:
        prev = antisymmetrizer_op(rep, n - 1)
        op = evaluate(build_f("forward", 1, n), rep, n) @ kron(prev, identity(rep.dim, 1))
    rep._a_cache[n] = op
    return op


class Height:
    """Height of a representation: exact value or a lower bound."""

    def __init__(self, value: Optional[int], bound: int):
        self.value = value
        self.bound = bound

    @property
    def finite(self) -> bool:
        return self.value is not None

    def __int__(self):
        if self.value is None:
            raise ValueError("height is only bounded below")
        return self.value

    def __eq__(self, other):
        if isinstance(other, Height):
            return (self.value, self.bound) == (other.value, other.bound)
        return self.value is not None and self.value == other

    def __hash__(self):
        return hash((self.value, self.bound))

    def __str__(self):
        return str(self.value) if self.value is not None else f">= {self.bound}"

    def __repr__(self):
        return f"Height({self})"

    def cap(self, default: int) -> int:
        return self.value if self.value is not None else default


def compute_height(rep: Representation, n_max: int = 5) -> Height:
    """Smallest h with ``A_{1->h+1} = 0``, scanning ``A_{1->2}..A_{1->n_max}``."""
    if n_max < 2:
        raise BadRange("n_max must be at least 2")
    for n in range(2, n_max + 1):
        if antisymmetrizer_op(rep, n).is_zero():
            return Height(n - 1, n - 1)
    return Height(None, n_max)


# -- identity suite -------------------------------------------------------------


def _compare(report: VerificationReport, check_id: str, subject, lhs: LinOp, rhs: LinOp, t0: float):
    diff = first_difference(lhs, rhs)
    report.add(check_id, subject, diff is None, diff, time.perf_counter() - t0)


def suite_instances(n_max: int):
    """Canonical list of (identity name, indices) pairs checked up to n_max."""
    out = []
    for n in range(2, n_max + 1):
        out.append(("antisymmetrizer_recursions", (n,)))
    for r in range(1, n_max):
        out.append(("y_fbar_exchange", (r,)))
    for n in range(2, n_max + 1):
        for m in range(1, n + 1):
            out.append(("factorization_f", (n, m)))
            out.append(("factorization_fbar", (n, m)))
    for n in range(1, n_max + 1):
        for m in range(1, n):
            out.append(("shuffle_factorization", (n, m)))
    for n in range(1, n_max):
        for k in range(1, n + 1):
            out.append(("shuffle_recursion", (n, k)))
    for n in range(1, n_max + 1):
        out.append(("shuffle_first", (n,)))
    for r in range(1, n_max):
        for k in range(1, r + 2):
            out.append(("zagier", (k, r + 1)))
    for n in range(3, n_max + 1):
        for m in range(2, n):
            for k in range(1, m):
                out.append(("shuffle_associativity", (n, m, k)))
    for m in range(1, n_max):
        out.append(("fbar_f_exchange", (m,)))
    for r in range(1, n_max + 1):
        for m in range(1, r + 1):
            if m < r:
                out.append(("jucys_murphy_commute", (r, m)))
    for r in range(3, n_max + 1):
        for m in range(1, r - 1):
            out.append(("jucys_murphy_sigma", (r, m)))
    return sorted(out)


def instance_sides(name: str, idx: Tuple[int, ...]):
    """(lhs, rhs, legs) braid elements for one identity instance."""
    one = BraidElement.one()
    if name == "antisymmetrizer_recursions":
        (n,) = idx
        return build_antisymmetrizer(n), build_antisymmetrizer_bar(n), n
    if name == "y_fbar_exchange":
        (r,) = idx
        lhs = build_y(1, r + 1) * build_f("backward", 1, r)
        sign = (-1) ** (r + 1)
        rhs = (sign * (build_f("forward", 1, r + 1) * _descending(r, 1))
               + build_f("backward", 1, r + 1)) * build_y(2, r + 1)
        return lhs, rhs, r + 1
    if name == "factorization_f":
        n, m = idx
        lhs = one
        for j in range(n, m - 1, -1):
            lhs = lhs * build_f("forward", 1, j)
        rhs = build_shuffle(n - m + 1, n) * build_antisymmetrizer(n - m + 1, m)
        return lhs, rhs, n
    if name == "factorization_fbar":
        n, m = idx
        lhs = one
        for j in range(1, m + 1):
            lhs = lhs * build_f("backward", j, n)
        rhs = build_shuffle(n - m, n) * build_antisymmetrizer(m, 1)
        return lhs, rhs, n
    if name == "shuffle_factorization":
        n, m = idx
        rhs = build_shuffle(n - m, n) * build_antisymmetrizer(m) * build_antisymmetrizer(n - m, m + 1)
        return build_antisymmetrizer(n), rhs, n
    if name == "shuffle_recursion":
        n, k = idx
        x = build_shuffle_permutations
        lhs = x(k, n + 1)
        rhs = x(k - 1, n) - ((-1) ** (k - 1)) * (x(k, n) * _descending(n, n - k + 1))
        return lhs, rhs, n + 1
    if name == "shuffle_first":
        (n,) = idx
        return build_shuffle(1, n), build_f("forward", 1, n), max(n, 2)
    if name == "zagier":
        k, rp1 = idx
        return build_y(k, rp1), build_y_zagier(k, rp1), rp1
    if name == "shuffle_associativity":
        n, m, k = idx
        lhs = build_shuffle(n - m, n) * build_shuffle(m - k, m)
        rhs = build_shuffle(n - k, n) * build_shuffle(n - m, n - k).shift(k)
        return lhs, rhs, n
    if name == "fbar_f_exchange":
        (m,) = idx
        lhs = build_f("forward", 1, m + 1) * build_f("backward", 1, m)
        rhs = build_f("backward", 1, m + 1) * build_f("forward", 2, m + 1)
        return lhs, rhs, m + 1
    if name == "jucys_murphy_commute":
        r, m = idx
        jr, jm = build_jucys_murphy(r), build_jucys_murphy(m)
        return jr * jm, jm * jr, r
    if name == "jucys_murphy_sigma":
        r, m = idx
        jr, s = build_jucys_murphy(r), generator(m)
        return s * jr, jr * s, r
    raise KeyError(name)


def verify_braid_suite(rep: Representation, n_max: int = 4, label: str = "") -> VerificationReport:
    """Check every braid-algebra identity instance up to ``n_max`` legs."""
    report = VerificationReport(f"braid identities in {label or rep.name or 'representation'}")
    cache: Dict[Tuple, LinOp] = {}

    def ev(e: BraidElement, n: int) -> LinOp:
        key = (tuple(e.terms), n)
        if key not in cache:
            cache[key] = evaluate(e, rep, n)
        return cache[key]

    for name, idx in suite_instances(n_max):
        t0 = time.perf_counter()
        lhs, rhs, n = instance_sides(name, idx)
        subject = ((label or rep.name),) + idx
        _compare(report, name, subject, ev(lhs, n), ev(rhs, n), t0)
    return report
