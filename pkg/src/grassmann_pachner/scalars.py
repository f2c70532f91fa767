"""Scalar backends.

Two coefficient fields are used throughout the package:

* the exact field: Python ``Fraction`` for real rationals, promoted to
  :class:`GaussianRational` as soon as the imaginary unit appears;
* the float field: Python ``complex`` with an absolute zero tolerance.

Everything downstream is written against the small :class:`Field` protocol
(``coerce``, ``is_zero``, ``sqrt``, ``magnitude``), so Grassmann elements and
linear solves work unchanged on either backend.
"""
from __future__ import annotations

import cmath
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DegenerateError, NotASquareError

DEFAULT_TOL = 1e-10
DEFAULT_REL_TOL = 1e-8
SAMPLE_BOUND = 9999


class GaussianRational:
    """Exact element ``re + i*im`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        p = self * o.conjugate()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (1 / self) ** (-k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """``|z|^2`` as an exact rational."""
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


I = GaussianRational(0, 1)

ExactScalar = Union[int, Fraction, GaussianRational]
Scalar = Union[ExactScalar, float, complex]


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


def is_zero(x, tol: float = DEFAULT_TOL) -> bool:
    """Zero test: exact equality for exact scalars, ``|re|, |im| < tol`` otherwise."""
    if is_exact(x):
        return x == 0
    z = complex(x)
    return abs(z.real) < tol and abs(z.imag) < tol


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exact_sqrt(z: ExactScalar) -> GaussianRational:
    """A square root of ``z`` inside Q(i); raises :class:`NotASquareError`."""
    z = GaussianRational._lift(z)
    a, b = z.re, z.im
    if b == 0 and a >= 0:
        r = rational_sqrt(a)
        if r is None:
            raise NotASquareError("value is not a rational square")
        return GaussianRational(r, 0)
    m = rational_sqrt(a * a + b * b)
    if m is None:
        raise NotASquareError("value is not a square in Q(i): irrational modulus")
    x = rational_sqrt((a + m) / 2)
    if x is None or x == 0:
        y = rational_sqrt((m - a) / 2)
        if y is None:
            raise NotASquareError("value is not a square in Q(i)")
        return GaussianRational(b / (2 * y), y) if y else GaussianRational(0, 0)
    return GaussianRational(x, b / (2 * x))


@dataclass(frozen=True)
class ExactField:
    """Exact arithmetic over Q(i); no tolerance anywhere."""

    name = "exact"

    @property
    def i(self):
        return I

    def coerce(self, x):
        if isinstance(x, (GaussianRational, Fraction)):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, complex):
            raise TypeError("float complex value given to the exact backend")
        if isinstance(x, numbers.Integral):
            return Fraction(int(x))
        raise TypeError(f"cannot use {type(x).__name__} in the exact backend")

    def is_zero(self, x) -> bool:
        return x == 0

    def sqrt(self, x):
        return exact_sqrt(x)

    def magnitude(self, x) -> float:
        return 0.0 if x == 0 else 1.0

    def reciprocal(self, x):
        if x == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return Fraction(1) / x

    def zero_threshold(self, entries) -> float:
        return 0.0


@dataclass(frozen=True)
class FloatField:
    """Double-precision complex arithmetic with an absolute zero tolerance."""

    tol: float = DEFAULT_TOL
    rel_tol: float = DEFAULT_REL_TOL
    name = "float"

    @property
    def i(self):
        return 1j

    def coerce(self, x) -> complex:
        return complex(x)

    def is_zero(self, x) -> bool:
        z = complex(x)
        return abs(z.real) < self.tol and abs(z.imag) < self.tol

    def sqrt(self, x) -> complex:
        return cmath.sqrt(complex(x))

    def magnitude(self, x) -> float:
        return abs(x)

    def reciprocal(self, x) -> complex:
        if self.is_zero(x):
            raise ZeroDivisionError("reciprocal of a value below tolerance")
        return 1 / complex(x)

    def zero_threshold(self, entries) -> float:
        # Rank decisions are relative to the largest entry of the matrix.
        scale = max((abs(e) for e in entries), default=0.0)
        return self.tol * max(1.0, scale)


EXACT = ExactField()
FLOAT = FloatField()

Field = Union[ExactField, FloatField]


@dataclass(frozen=True)
class CirclePoint:
    """A point ``(c, s)`` on the unit circle standing in for ``(cos t, sin t)``."""

    c: Scalar
    s: Scalar

    def check(self, field: Field = EXACT) -> bool:
        return field.is_zero(self.c * self.c + self.s * self.s - 1)

    @classmethod
    def from_angle(cls, theta: complex) -> "CirclePoint":
        return cls(cmath.cos(theta), cmath.sin(theta))

    def to(self, field: Field) -> "CirclePoint":
        return CirclePoint(field.coerce(self.c), field.coerce(self.s))


def circle_point(t) -> CirclePoint:
    """Rational point ``((1-t^2)/(1+t^2), 2t/(1+t^2))`` on the unit circle."""
    if not is_exact(t):
        raise TypeError("circle_point expects an exact scalar")
    t = t if isinstance(t, GaussianRational) else Fraction(t)
    denom = 1 + t * t
    if denom == 0:
        raise DegenerateError("1 + t^2 vanishes")
    return CirclePoint((1 - t * t) / denom, 2 * t / denom)


def random_rational(rng, bound: int = SAMPLE_BOUND, nonzero: bool = False) -> Fraction:
    """Numerator and denominator uniform on ``[-bound, bound]``, denominator nonzero.

    ``rng`` is a ``numpy.random.Generator``.
    """
    while True:
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(-bound, bound + 1))
        if den == 0 or (nonzero and num == 0):
            continue
        return Fraction(num, den)
