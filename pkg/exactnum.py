#!/usr/bin/env python3
"""
exactnum.py

Exact scalars for the certificate checks: rationals (``fractions.Fraction``)
and the real quadratic field Q(sqrt d), with exact sign and ordering.

Entry grammar shared by every file format:

    INT | INT/UINT | R1+R2s | R1-R2s | R2s

where ``s`` stands for sqrt(2), e.g. ``5/44``, ``3/4+1/8s``, ``-1/11+1/11s``.

Usage:
    from exactnum import QuadExt, parse_entry, sign
    q = parse_entry("2-1s")          # 2 - sqrt(2)
    sign(q)                          # 1
"""
from __future__ import annotations

import math
import operator
import re
from fractions import Fraction
from typing import Any, Callable, Dict, Union

import mpmath

Rational = Fraction
Scalar = Union[int, Fraction, "QuadExt"]

ENTRY_RE = re.compile(r'^([+-]?\d+(?:/\d+)?)(?:([+-])(\d+(?:/\d+)?)s)?$')
SURD_ONLY_RE = re.compile(r'^([+-]?\d+(?:/\d+)?)s$')


class MalformedEntryError(ValueError):
    pass


class RadicandMismatchError(ValueError):
    pass


# ────────────────────────── helpers

def _is_square_free(d: int) -> bool:
    if d < 2:
        return False
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


# ────────────────────────── Q(sqrt d)

class QuadExt:
    """a + b*sqrt(d) with rational a, b; immutable and always canonical."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0, d: int = 2) -> None:
        if not _is_square_free(d):
            raise ValueError(f"radicand must be a square-free integer >= 2, got {d}")
        object.__setattr__(self, "_a", Fraction(a))
        object.__setattr__(self, "_b", Fraction(b))
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("QuadExt is immutable")

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    @classmethod
    def from_rational(cls, x: int | Fraction, d: int = 2) -> QuadExt:
        return cls(x, 0, d)

    @classmethod
    def sqrt(cls, d: int = 2) -> QuadExt:
        return cls(0, 1, d)

    def is_rational(self) -> bool:
        return self._b == 0

    def __repr__(self) -> str:
        return f"QuadExt({self._a}, {self._b}, d={self._d})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        return f"{self._a}{'+' if self._b > 0 else '-'}{abs(self._b)}√{self._d}"

    # -- coercion
    def _coerce(self, other: Any) -> QuadExt | None:
        if isinstance(other, QuadExt):
            if other.d != self._d:
                raise RadicandMismatchError(
                    f"cannot combine sqrt({self._d}) with sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadExt(other, 0, self._d)
        return None

    # -- field operations
    def __add__(self, other: Any) -> QuadExt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self._a + o.a, self._b + o.b, self._d)

    def __radd__(self, other: Any) -> QuadExt:
        return self + other

    def __neg__(self) -> QuadExt:
        return QuadExt(-self._a, -self._b, self._d)

    def __pos__(self) -> QuadExt:
        return self

    def __sub__(self, other: Any) -> QuadExt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self._a - o.a, self._b - o.b, self._d)

    def __rsub__(self, other: Any) -> QuadExt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> QuadExt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self._a * o.a + self._d * self._b * o.b,
                       self._a * o.b + self._b * o.a, self._d)

    def __rmul__(self, other: Any) -> QuadExt:
        return self * other

    def conjugate(self) -> QuadExt:
        return QuadExt(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d*b^2; zero only for zero."""
        return self._a * self._a - self._d * self._b * self._b

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return QuadExt(self._a / n, -self._b / n, self._d)

    def __truediv__(self, other: Any) -> QuadExt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> QuadExt:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> QuadExt:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** -n
        result = QuadExt(1, 0, self._d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self) -> QuadExt:
        return -self if self.sign() < 0 else self

    # -- comparison
    def sign(self) -> int:
        sa, sb = _sgn(self._a), _sgn(self._b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger magnitude wins (a^2 == d*b^2 is impossible)
        return sa if self._a * self._a > self._d * self._b * self._b else sb

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, QuadExt):
            return (self._d == other.d or self._b == other.b == 0) and \
                self._a == other.a and self._b == other.b
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def _cmp(self, other: Any) -> int | None:
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other: Any) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    # -- approximations (never used for decisions)
    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def to_mpf(self, dps: int = 50) -> mpmath.mpf:
        with mpmath.workdps(dps):
            a = mpmath.mpf(self._a.numerator) / self._a.denominator
            b = mpmath.mpf(self._b.numerator) / self._b.denominator
            return a + b * mpmath.sqrt(self._d)


SQRT2 = QuadExt(0, 1)


# ────────────────────────── scalar API

def as_field(x: Scalar) -> Scalar:
    """Canonical scalar: ints become Fractions, rational QuadExt stays QuadExt."""
    if isinstance(x, QuadExt):
        return x
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise TypeError(f"not an exact scalar: {x!r}")
    return Fraction(x)


def sign(x: Scalar) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return _sgn(Fraction(x))


_OPS: Dict[str, Callable[[Any, Any], Any]] = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


def rat_arith(x: Fraction, y: Fraction, op: str) -> Fraction:
    if op not in _OPS:
        raise ValueError(f"unknown operator {op!r}")
    return _OPS[op](Fraction(x), Fraction(y))


def quad_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    if op not in _OPS:
        raise ValueError(f"unknown operator {op!r}")
    if x.d != y.d:
        raise RadicandMismatchError(f"cannot combine sqrt({x.d}) with sqrt({y.d})")
    return _OPS[op](x, y)


def to_mpf(x: Scalar, dps: int = 50) -> mpmath.mpf:
    if isinstance(x, QuadExt):
        return x.to_mpf(dps)
    f = Fraction(x)
    with mpmath.workdps(dps):
        return mpmath.mpf(f.numerator) / f.denominator


# ────────────────────────── entry grammar

def parse_entry(text: str) -> Fraction | QuadExt:
    """Parse one entry; rationals come back as Fraction, surds as QuadExt(d=2)."""
    t = text.strip()
    try:
        m = ENTRY_RE.match(t)
        if m:
            a = Fraction(m.group(1))
            if m.group(2) is None:
                return a
            b = Fraction(m.group(3))
            return QuadExt(a, b if m.group(2) == "+" else -b)
        m = SURD_ONLY_RE.match(t)
        if m:
            return QuadExt(0, Fraction(m.group(1)))
    except ZeroDivisionError:
        raise MalformedEntryError(f"zero denominator in entry: {text!r}") from None
    raise MalformedEntryError(f"malformed entry: {text!r}")


def parse_rational(text: str) -> Fraction:
    x = parse_entry(text)
    if isinstance(x, QuadExt):
        if not x.is_rational():
            raise MalformedEntryError(f"expected a rational entry, got {text!r}")
        return x.a
    return x


def format_entry(x: Scalar) -> str:
    if isinstance(x, QuadExt):
        if x.is_rational():
            return str(x.a)
        if x.d != 2:
            raise ValueError(f"entry grammar only covers sqrt(2), got sqrt({x.d})")
        return f"{x.a}{'+' if x.b > 0 else '-'}{abs(x.b)}s"
    return str(Fraction(x))


def to_json(x: Scalar) -> Dict[str, Any]:
    return {"exact": format_entry(x), "approx": float(x)}
