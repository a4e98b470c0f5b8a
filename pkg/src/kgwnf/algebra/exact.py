"""Gaussian rationals: exact complex numbers with rational real and imaginary parts."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["ExactComplex", "I", "ONE", "ZERO", "as_exact"]


class ExactComplex:
    """Exact complex number ``re + i*im`` with :class:`fractions.Fraction` parts.

    Instances are immutable and hashable. Mixing with ``int`` and ``Fraction``
    is supported; mixing with ``float`` or ``complex`` raises ``TypeError`` so
    that no rounding can leak into symbolic code.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("floating point values are not allowed in exact arithmetic")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> ExactComplex:
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ExactComplex._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return ExactComplex._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ExactComplex._raw(a * c, b)
        return ExactComplex._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        den = other.re * other.re + other.im * other.im
        if not den:
            raise ZeroDivisionError("division by exact zero")
        a, b, c, d = self.re, self.im, other.re, other.im
        return ExactComplex._raw((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return ExactComplex._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / (self ** (-n))
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> ExactComplex:
        return ExactComplex._raw(self.re, -self.im)

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return not self.im

    # text -----------------------------------------------------------------
    def __repr__(self):
        return f"ExactComplex({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_exact(self)

    def to_json(self) -> dict:
        return {"re": _frac_str(self.re), "im": _frac_str(self.im)}

    @classmethod
    def from_json(cls, data: dict) -> ExactComplex:
        return cls(Fraction(data["re"]), Fraction(data["im"]))


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _coerce(x):
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Rational)):
        return ExactComplex._raw(Fraction(x), Fraction(0))
    return NotImplemented


def as_exact(x) -> ExactComplex:
    """Coerce an int, Fraction or ExactComplex to :class:`ExactComplex`."""
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to ExactComplex")
    return out


def format_exact(c: ExactComplex) -> str:
    """Human-readable form: ``-1/8``, ``i/16``, ``3i/16``, ``(1/2 - i/4)``."""

    def real_part(x: Fraction) -> str:
        return str(x)

    def imag_part(x: Fraction) -> str:
        num, den = abs(x.numerator), x.denominator
        sign = "-" if x < 0 else ""
        head = "i" if num == 1 else f"{num}i"
        return sign + (head if den == 1 else f"{head}/{den}")

    if not c.im:
        return real_part(c.re)
    if not c.re:
        return imag_part(c.im)
    im = imag_part(c.im)
    op = " - " if im.startswith("-") else " + "
    return f"({real_part(c.re)}{op}{im.lstrip('-')})"


ZERO = ExactComplex(0, 0)
ONE = ExactComplex(1, 0)
I = ExactComplex(0, 1)
