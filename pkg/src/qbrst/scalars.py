"""Exact coefficient arithmetic.

Two kinds of scalar are used throughout the package:

* rationals, represented by :class:`int` or :class:`fractions.Fraction`;
* Laurent polynomials in a formal variable ``q`` with rational
  coefficients, represented by :class:`Laurent`.

Both are immutable.  Arithmetic between a rational and a Laurent
polynomial promotes the rational to a constant Laurent polynomial.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "Laurent",
    "Scalar",
    "ScalarError",
    "DivisionByZero",
    "NonInvertibleLaurent",
    "ZeroSpecialization",
    "ScalarParseError",
    "arith",
    "specialize",
    "parse_scalar",
    "format_scalar",
    "normalize",
    "is_unit",
    "q",
]

EXPONENT_BOUND = 2**31


class ScalarError(ArithmeticError):
    pass


class DivisionByZero(ScalarError, ZeroDivisionError):
    pass


class NonInvertibleLaurent(ScalarError):
    pass


class ZeroSpecialization(ScalarError):
    pass


class ScalarParseError(ValueError):
    pass


def _check_exponent(e: int) -> int:
    if not -EXPONENT_BOUND < e < EXPONENT_BOUND:
        raise OverflowError(f"Laurent exponent {e} out of range")
    return e


class Laurent:
    """Laurent polynomial in ``q`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in dict(terms).items():
                c = Fraction(c)
                if c:
                    clean[_check_exponent(int(e))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, c) -> "Laurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, e: int) -> "Laurent":
        return cls({e: c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def constant_value(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def min_exp(self) -> int:
        return min(self._terms)

    def max_exp(self) -> int:
        return max(self._terms)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return Laurent({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Laurent.const(1) / (self ** (-n))
        out = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _laurent_div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _laurent_div(other, self)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __call__(self, q0):
        return specialize(self, q0)

    def __repr__(self):
        return f"Laurent({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, Laurent]

q = Laurent.monomial(1, 1)


def _laurent_div(a: Laurent, b: Laurent) -> Laurent:
    if not b:
        raise DivisionByZero("division by zero Laurent polynomial")
    if not a:
        return Laurent()
    if b.is_monomial():
        (eb, cb), = b._terms.items()
        return Laurent({e - eb: c / cb for e, c in a._terms.items()})
    # exact long division of polynomials after clearing negative exponents
    sa, sb = a.min_exp(), b.min_exp()
    num = {e - sa: c for e, c in a._terms.items()}
    den = {e - sb: c for e, c in b._terms.items()}
    dn = max(den)
    lead = den[dn]
    quot: dict = {}
    while num:
        top = max(num)
        if top < dn:
            raise NonInvertibleLaurent(
                f"{format_scalar(a)} is not divisible by {format_scalar(b)}"
            )
        c = num[top] / lead
        s = top - dn
        quot[s] = c
        for e, d in den.items():
            k = e + s
            v = num.get(k, 0) - c * d
            if v:
                num[k] = v
            else:
                num.pop(k, None)
    return Laurent({e + sa - sb: c for e, c in quot.items()})


def normalize(x):
    """Canonical Python value for a scalar: ints for integral rationals."""
    if isinstance(x, Laurent):
        return x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def is_unit(x) -> bool:
    """True when ``x`` is invertible in its own ring."""
    if isinstance(x, Laurent):
        return x.is_monomial()
    return x != 0


def arith(a, b, op: str):
    """Exact ``a <op> b`` with ``op`` one of add, sub, mul, div."""
    if isinstance(a, Laurent) or isinstance(b, Laurent):
        a = a if isinstance(a, Laurent) else Laurent.const(a)
        b = b if isinstance(b, Laurent) else Laurent.const(b)
    else:
        a, b = Fraction(a), Fraction(b)
    if op == "add":
        r = a + b
    elif op == "sub":
        r = a - b
    elif op == "mul":
        r = a * b
    elif op == "div":
        if not b:
            raise DivisionByZero("division by zero")
        r = a / b
    else:
        raise ValueError(f"unknown operation {op!r}")
    return normalize(r)


def specialize(s, q0):
    """Evaluate ``s`` at ``q = q0``; rationals pass through unchanged."""
    q0 = Fraction(q0)
    if q0 == 0:
        raise ZeroSpecialization("cannot specialize a Laurent polynomial at q = 0")
    if not isinstance(s, Laurent):
        return normalize(s)
    total = Fraction(0)
    for e, c in s._terms.items():
        total += c * q0**e
    return normalize(total)


# -- textual syntax ---------------------------------------------------------

_TERM = re.compile(
    r"""
    (?P<sign>[+-])?
    (?:
        (?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*)?(?P<qa>q(?:\^(?P<ea>[+-]?\d+))?)?
      | (?P<qb>q(?:\^(?P<eb>[+-]?\d+))?)
    )
    """,
    re.VERBOSE,
)


def parse_scalar(text: str):
    """Parse ``"3"``, ``"-3/4"``, ``"q^-2"``, ``"1 - q^2"`` and the like.

    Whitespace is ignored.  Anything mentioning ``q`` yields a
    :class:`Laurent`; otherwise an int or Fraction is returned.
    """
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)):
            return normalize(text)
        raise ScalarParseError(f"scalar must be a string, got {type(text).__name__}")
    s = "".join(text.split())
    if not s:
        raise ScalarParseError("empty scalar")
    pos = 0
    terms: dict = {}
    uses_q = False
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not first and m.group("sign") is None):
            raise ScalarParseError(f"cannot parse scalar {text!r} at offset {pos}")
        first = False
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("qb") is not None:
            coef = Fraction(1)
            e = int(m.group("eb") or 1)
            uses_q = True
        else:
            if m.group("coef") is None:
                raise ScalarParseError(f"cannot parse scalar {text!r}")
            coef = Fraction(m.group("coef"))
            if m.group("qa") is not None:
                e = int(m.group("ea") or 1)
                uses_q = True
            else:
                e = 0
        terms[e] = terms.get(e, 0) + sign * coef
        pos = m.end()
    if uses_q:
        return Laurent(terms)
    return normalize(terms.get(0, 0))


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(x) -> str:
    """Inverse of :func:`parse_scalar` (round-trips exactly)."""
    if not isinstance(x, Laurent):
        return _fmt_frac(Fraction(x))
    if not x:
        return "0"
    parts = []
    for e, c in sorted(x._terms.items(), key=lambda t: -t[0]):
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if e == 0:
            body = _fmt_frac(mag)
        else:
            qs = "q" if e == 1 else f"q^{e}"
            body = qs if mag == 1 else f"{_fmt_frac(mag)}{qs}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
