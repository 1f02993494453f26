"""Exact scalars: rationals (``fractions.Fraction``) and elements of a real quadratic field.

Rationals are plain :class:`~fractions.Fraction` objects. Elements ``a + b*sqrt(d)`` of
Q(sqrt d) are :class:`QuadNumber`. Both kinds mix freely in arithmetic, but two
quadratic numbers over different ``d`` never do.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import FieldMismatchError, InvariantError

Scalar = Union[Fraction, "QuadNumber"]


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


class QuadNumber:
    """An element ``a + b*sqrt(d)`` of the real quadratic field Q(sqrt d).

    ``d`` must be a square-free integer >= 2.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if not _squarefree(d):
            raise InvariantError(f"field discriminant must be a square-free integer >= 2, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, d: int) -> QuadNumber:
        # trusted constructor for arithmetic results: d already validated, a and b Fractions
        x = object.__new__(cls)
        x.a, x.b, x.d = a, b, d
        return x

    @classmethod
    def sqrt(cls, d: int) -> QuadNumber:
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadNumber):
            if other.d != self.d:
                raise FieldMismatchError(f"cannot mix Q(sqrt {self.d}) with Q(sqrt {other.d})")
            return other.a, other.b
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadNumber._make(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadNumber._make(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadNumber._make(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return QuadNumber._make(self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> QuadNumber:
        return QuadNumber._make(self.a, -self.b, self.d)

    def inverse(self) -> QuadNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadNumber._make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadNumber):
            self._coerce(other)
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return QuadNumber._make(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * Fraction(other)
        return NotImplemented

    def __neg__(self):
        return QuadNumber._make(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result: Scalar = QuadNumber(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadNumber):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        """Sign of the real number ``a + b*sqrt(d)``, decided exactly."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with d b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt({self.d})"


def as_scalar(x, d: int | None = None) -> Scalar:
    """Coerce ``x`` into an exact scalar, lifting rationals into Q(sqrt d) when ``d`` is given."""
    if isinstance(x, QuadNumber):
        if d is not None and x.b != 0 and x.d != d:
            raise FieldMismatchError(f"scalar over Q(sqrt {x.d}) used in Q(sqrt {d}) context")
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not exact scalars")
    return Fraction(x)


def field_of(x) -> int | None:
    """Return ``d`` when ``x`` carries an irrational surd part, else None."""
    if isinstance(x, QuadNumber) and x.b != 0:
        return x.d
    return None


def sign(x: Scalar) -> int:
    if isinstance(x, QuadNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_to_json(x: Scalar):
    """Text form: ``"p/q"`` for rationals, ``{"a": .., "b": ..}`` for surds."""
    if isinstance(x, QuadNumber):
        if x.b == 0:
            return format_rational(x.a)
        return {"a": format_rational(x.a), "b": format_rational(x.b)}
    return format_rational(x)


def _parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        s = s.strip()
        if "." in s or "e" in s.lower():
            raise ValueError(f"scalar text must be an integer or p/q, got {s!r}")
        return Fraction(s)
    raise ValueError(f"cannot parse scalar from {s!r}")


def scalar_from_json(obj, d: int | None = None) -> Scalar:
    if isinstance(obj, dict):
        if set(obj) != {"a", "b"}:
            raise ValueError(f"quadratic scalar must have exactly keys a, b: {obj!r}")
        if d is None:
            raise ValueError("quadratic scalar in a document without a Qsqrt field")
        return QuadNumber(_parse_rational(obj["a"]), _parse_rational(obj["b"]), d)
    return _parse_rational(obj)
