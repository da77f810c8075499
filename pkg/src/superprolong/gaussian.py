"""Exact complex scalars a + b*i with rational a, b."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["GaussianRational", "to_gr", "I", "ZERO", "ONE"]


class GaussianRational:
    """An element of Q(i).

    Both parts are :class:`fractions.Fraction`, so denominators stay positive and
    reduced after every operation.  Instances compare equal to plain ints and
    Fractions when the imaginary part vanishes.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _new(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def __add__(self, other):
        if type(other) is GaussianRational:
            return GaussianRational._new(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational._new(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is GaussianRational:
            return GaussianRational._new(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational._new(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussianRational._new(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if type(other) is GaussianRational:
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b:
                if not d:
                    return GaussianRational._new(a * c, b)
                return GaussianRational._new(a * c, a * d)
            if not d:
                return GaussianRational._new(a * c, b * c)
            return GaussianRational._new(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational)):
            return GaussianRational._new(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if type(other) is GaussianRational:
            c, d = other.re, other.im
            if not d:
                if not c:
                    raise ZeroDivisionError("division by zero in Q(i)")
                return GaussianRational._new(self.re / c, self.im / c)
            n = c * c + d * d
            a, b = self.re, self.im
            return GaussianRational._new((a * c + b * d) / n, (b * c - a * d) / n)
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussianRational._new(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussianRational(other) / self
        return NotImplemented

    def __neg__(self):
        return GaussianRational._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / (self ** (-k))
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is GaussianRational:
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._new(self.re, -self.im)

    def is_real(self) -> bool:
        return not self.im

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_gr(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def to_gr(x) -> GaussianRational:
    """Coerce ints, Fractions, rational strings and exact complex pairs."""
    if type(x) is GaussianRational:
        return x
    if isinstance(x, (int, Rational)):
        return GaussianRational._new(Fraction(x), Fraction(0))
    if isinstance(x, str):
        return parse_gr(x)
    if isinstance(x, tuple) and len(x) == 2:
        return GaussianRational(x[0], x[1])
    if isinstance(x, complex):
        if x.real != int(x.real) or x.imag != int(x.imag):
            raise TypeError(f"refusing inexact complex {x!r}; pass Fractions")
        return GaussianRational(int(x.real), int(x.imag))
    raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_gr(z: GaussianRational) -> str:
    """Wire format: ``"a/b"`` for reals, ``"a/b+c/d*i"`` otherwise."""
    if not z.im:
        return _fmt_q(z.re)
    im = z.im
    sign = "-" if im < 0 else "+"
    if not z.re:
        head = "-" if im < 0 else ""
        mag = _fmt_q(abs(im))
        return f"{head}i" if mag == "1" else f"{head}{mag}*i"
    mag = _fmt_q(abs(im))
    tail = "i" if mag == "1" else f"{mag}*i"
    return f"{_fmt_q(z.re)}{sign}{tail}"


_Q = r"[+-]?\d+(?:/\d+)?"
_GR_RE = re.compile(
    rf"^\s*(?:(?P<re>{_Q})(?:(?P<sign>[+-])(?:(?P<im>\d+(?:/\d+)?)\*)?i)?"
    rf"|(?P<pure>[+-]?(?:\d+(?:/\d+)?\*)?)i)\s*$"
)


def parse_gr(s: str) -> GaussianRational:
    m = _GR_RE.match(s)
    if not m:
        raise ValueError(f"malformed Gaussian rational {s!r}")
    if m.group("re") is not None:
        re_part = Fraction(m.group("re"))
        if m.group("sign") is None:
            return GaussianRational(re_part)
        im_part = Fraction(m.group("im") or 1)
        if m.group("sign") == "-":
            im_part = -im_part
        return GaussianRational(re_part, im_part)
    pure = m.group("pure").rstrip("*")
    if pure in ("", "+"):
        return GaussianRational(0, 1)
    if pure == "-":
        return GaussianRational(0, -1)
    return GaussianRational(0, Fraction(pure))
