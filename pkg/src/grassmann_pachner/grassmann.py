"""Sparse Grassmann algebra over named generators.

A monomial is an integer bitmask over generator indices; bit ``i`` set means
``x_i`` is present, always read in ascending index order.  All sign
bookkeeping follows from that canonical order.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import RegistryMismatchError
from .scalars import is_exact, is_zero


class GeneratorRegistry:
    """Bijection between generator labels (e.g. tetrahedra) and dense indices."""

    def __init__(self, labels: Iterable[Hashable]):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("duplicate generator labels")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorRegistry) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"GeneratorRegistry({list(self.labels)!r})"

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown generator {label!r}") from None

    def label(self, i: int):
        return self.labels[i]

    def mask(self, labels: Iterable[Hashable]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def generator(self, label, coeff=1) -> "GrassmannElement":
        return GrassmannElement(self, {1 << self.index(label): coeff})

    def monomial(self, labels: Sequence[Hashable], coeff=1) -> "GrassmannElement":
        """The product ``coeff * x_{l0} x_{l1} ...`` in the order given."""
        out = self.scalar(coeff)
        for lab in labels:
            out = out * self.generator(lab)
        return out

    def scalar(self, c) -> "GrassmannElement":
        return GrassmannElement(self, {0: c})

    def one(self) -> "GrassmannElement":
        return self.scalar(1)

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def format_label(self, label) -> str:
        if isinstance(label, tuple):
            parts = [str(v) for v in label]
            return "".join(parts) if all(len(p) == 1 for p in parts) else ",".join(parts)
        return str(label)


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


def _popcount(m: int) -> int:
    return m.bit_count()


def merge_sign(a: int, b: int) -> int:
    """Sign of reordering the concatenation ``x^a x^b`` into canonical order.

    Assumes ``a & b == 0``.
    """
    n = 0
    while b:
        low = b & -b
        n += _popcount(a >> low.bit_length())
        b ^= low
    return -1 if n & 1 else 1


def _fmt_coeff(c) -> str:
    if isinstance(c, complex):
        return f"({c.real:.12g}{c.imag:+.12g}j)"
    if isinstance(c, float):
        return f"{c:.12g}"
    return str(c)


class GrassmannElement:
    """Immutable sparse element: ``{mask: nonzero coefficient}``."""

    __slots__ = ("registry", "terms")

    def __init__(self, registry: GeneratorRegistry, terms: Mapping[int, object] | None = None):
        self.registry = registry
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    # -- construction helpers -------------------------------------------
    def _new(self, terms) -> "GrassmannElement":
        return GrassmannElement(self.registry, terms)

    def _check(self, other: "GrassmannElement") -> None:
        if other.registry is not self.registry and other.registry != self.registry:
            raise RegistryMismatchError("elements over different registries")

    def _lift(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            self._check(other)
            return other
        return self._new({0: other})

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms.get(m, 0) + c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            return self.scale(other)
        self._check(other)
        out: dict[int, object] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                m = ma | mb
                v = ca * cb
                if merge_sign(ma, mb) < 0:
                    v = -v
                out[m] = out.get(m, 0) + v
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, GrassmannElement):
            return self * other.inverse()
        if isinstance(other, int):
            other = Fraction(other)
        return self._new({m: c / other for m, c in self.terms.items()})

    def scale(self, c) -> "GrassmannElement":
        if c == 0:
            return self._new({})
        return self._new({m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.registry == other.registry and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.registry, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"GrassmannElement({self.dump()})"

    # -- inspection -----------------------------------------------------
    def coefficient(self, labels: Iterable[Hashable] = ()) -> object:
        """Coefficient of the canonical monomial on ``labels``."""
        return self.terms.get(self.registry.mask(labels), 0)

    @property
    def constant(self):
        return self.terms.get(0, 0)

    def degrees(self) -> set[int]:
        return {_popcount(m) for m in self.terms}

    def homogeneous_part(self, k: int) -> "GrassmannElement":
        return self._new({m: c for m, c in self.terms.items() if _popcount(m) == k})

    def support(self) -> int:
        """Bitmask of all generators appearing in some monomial."""
        s = 0
        for m in self.terms:
            s |= m
        return s

    def max_abs(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    def is_zero(self, tol: float | None = None) -> bool:
        if tol is None:
            return not self.terms
        return all(is_zero(c, tol) for c in self.terms.values())

    def chop(self, tol: float) -> "GrassmannElement":
        """Drop float coefficients below ``tol`` (no effect on exact ones)."""
        return self._new({m: c for m, c in self.terms.items() if is_exact(c) or abs(c) >= tol})

    def dump(self) -> str:
        """Text form: ``+c x_{l1} x_{l2} ...`` terms, sorted by degree then indices."""
        if not self.terms:
            return "0"
        reg = self.registry
        parts = []
        for m in sorted(self.terms, key=lambda m: (_popcount(m), _bits(m))):
            c = self.terms[m]
            names = " ".join(f"x_{{{reg.format_label(reg.label(i))}}}" for i in _bits(m))
            neg = not isinstance(c, complex) and _is_negative(c)
            coeff = _fmt_coeff(-c if neg else c)
            sign = "-" if neg else "+"
            parts.append(f"{sign} {coeff}" + (f" {names}" if names else ""))
        return " ".join(parts)

    # -- calculus -----------------------------------------------------------
    def left_derivative(self, i: int) -> "GrassmannElement":
        bit = 1 << i
        below = bit - 1
        out = {}
        for m, c in self.terms.items():
            if m & bit:
                out[m ^ bit] = -c if _popcount(m & below) & 1 else c
        return self._new(out)

    def right_derivative(self, i: int) -> "GrassmannElement":
        bit = 1 << i
        out = {}
        for m, c in self.terms.items():
            if m & bit:
                out[m ^ bit] = -c if _popcount(m >> (i + 1)) & 1 else c
        return self._new(out)

    def left_multiply_generator(self, i: int) -> "GrassmannElement":
        """``x_i * self`` without building a generator element."""
        bit = 1 << i
        below = bit - 1
        out = {}
        for m, c in self.terms.items():
            if not m & bit:
                out[m | bit] = -c if _popcount(m & below) & 1 else c
        return self._new(out)

    def integrate(self, indices: Sequence[int]) -> "GrassmannElement":
        out = self
        for i in indices:
            out = out.right_derivative(i)
        return out

    def parity(self) -> Parity:
        ds = {d & 1 for d in self.degrees()}
        if not ds or ds == {0}:
            return Parity.EVEN
        if ds == {1}:
            return Parity.ODD
        return Parity.MIXED

    def exp(self) -> "GrassmannElement":
        return exponential(self)

    def inverse(self) -> "GrassmannElement":
        """Inverse of ``a0 + n`` with ``a0`` a nonzero scalar and ``n`` nilpotent."""
        a0 = self.constant
        if a0 == 0:
            raise ZeroDivisionError("element has no scalar part; not invertible")
        inv0 = Fraction(1, a0) if isinstance(a0, int) else 1 / a0
        n = (self - a0).scale(-inv0)
        out = self._new({0: 1})
        power = self._new({0: 1})
        while True:
            power = power * n
            if not power:
                break
            out = out + power
        return out.scale(inv0)

    def substitute_scale(self, i: int, c) -> "GrassmannElement":
        """Substitute ``x_i -> c * x_i``."""
        bit = 1 << i
        return self._new({m: (v * c if m & bit else v) for m, v in self.terms.items()})

    def map_coefficients(self, f) -> "GrassmannElement":
        return self._new({m: f(c) for m, c in self.terms.items()})


def _is_negative(c) -> bool:
    re = getattr(c, "re", None)
    if re is not None:
        return (re < 0) or (re == 0 and c.im < 0)
    try:
        return c < 0
    except TypeError:
        return False


def _bits(m: int) -> list[int]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return out


# -- functional surface ------------------------------------------------------

def multiply(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def derivative(f: GrassmannElement, i: int, side: str = "left") -> GrassmannElement:
    if side == "left":
        return f.left_derivative(i)
    if side == "right":
        return f.right_derivative(i)
    raise ValueError("side must be 'left' or 'right'")


def berezin_integrate(f: GrassmannElement, indices: Sequence[int]) -> GrassmannElement:
    """Iterated right derivatives, first listed variable innermost."""
    return f.integrate(indices)


def exponential(f: GrassmannElement) -> GrassmannElement:
    """Taylor series of ``exp`` for an even element with zero constant term."""
    if f.constant != 0:
        raise ValueError("exponential needs zero constant term")
    if f.parity() is not Parity.EVEN:
        raise ValueError("exponential needs an even element")
    out = f._new({0: 1})
    power = f._new({0: 1})
    k = 0
    while True:
        k += 1
        power = (power * f) / k
        if not power:
            break
        out = out + power
    return out


def parity(f: GrassmannElement) -> Parity:
    return f.parity()
