"""First-order Grassmann differential operators ``sum_t (beta_t d_t + gamma_t x_t)``.

Their anticommutator is a scalar, which makes the operator space a complex
Euclidean space; this module handles that pairing, isotropy tests and the two
solvers that turn a 5-dimensional isotropic space into a 4-simplex weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from . import linalg
from .errors import DegenerateError, RegistryMismatchError
from .grassmann import GeneratorRegistry, GrassmannElement, Parity, exponential
from .scalars import EXACT, Field


def _clean(d: Mapping[int, object]) -> dict[int, object]:
    return {k: v for k, v in d.items() if v != 0}


@dataclass(frozen=True, eq=False)
class FirstOrderOperator:
    """Operator ``sum_t (beta[t] * d/dx_t + gamma[t] * x_t)`` over a registry."""

    registry: GeneratorRegistry
    beta: Mapping[int, object] = dc_field(default_factory=dict)
    gamma: Mapping[int, object] = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "beta", _clean(self.beta))
        object.__setattr__(self, "gamma", _clean(self.gamma))

    @classmethod
    def d(cls, registry: GeneratorRegistry, label, coeff=1) -> "FirstOrderOperator":
        return cls(registry, {registry.index(label): coeff}, {})

    @classmethod
    def x(cls, registry: GeneratorRegistry, label, coeff=1) -> "FirstOrderOperator":
        return cls(registry, {}, {registry.index(label): coeff})

    @classmethod
    def zero(cls, registry: GeneratorRegistry) -> "FirstOrderOperator":
        return cls(registry)

    @classmethod
    def from_vector(cls, registry: GeneratorRegistry, vec: Sequence, indices: Sequence[int] | None = None):
        """Inverse of :meth:`to_vector`."""
        idx = list(range(len(registry))) if indices is None else list(indices)
        n = len(idx)
        return cls(registry, {t: vec[k] for k, t in enumerate(idx)},
                   {t: vec[n + k] for k, t in enumerate(idx)})

    def to_vector(self, indices: Sequence[int] | None = None) -> list:
        """``[beta_t ...] + [gamma_t ...]`` over ``indices`` (default: the whole registry)."""
        idx = list(range(len(self.registry))) if indices is None else list(indices)
        return [self.beta.get(t, 0) for t in idx] + [self.gamma.get(t, 0) for t in idx]

    def _check(self, other):
        if other.registry is not self.registry and other.registry != self.registry:
            raise RegistryMismatchError("operators over different registries")

    def __add__(self, other: "FirstOrderOperator") -> "FirstOrderOperator":
        self._check(other)
        b = dict(self.beta)
        g = dict(self.gamma)
        for t, v in other.beta.items():
            b[t] = b.get(t, 0) + v
        for t, v in other.gamma.items():
            g[t] = g.get(t, 0) + v
        return FirstOrderOperator(self.registry, b, g)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FirstOrderOperator":
        return FirstOrderOperator(self.registry, {t: c * v for t, v in self.beta.items()},
                                  {t: c * v for t, v in self.gamma.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def support(self) -> set[int]:
        return set(self.beta) | set(self.gamma)

    def restrict(self, indices: Iterable[int]) -> "FirstOrderOperator":
        """Orthogonal projection onto the coordinates of ``indices``."""
        keep = set(indices)
        return FirstOrderOperator(self.registry,
                                  {t: v for t, v in self.beta.items() if t in keep},
                                  {t: v for t, v in self.gamma.items() if t in keep})

    def swap(self, indices: Iterable[int]) -> "FirstOrderOperator":
        """Interchange ``d_t <-> x_t`` for every ``t`` in ``indices``."""
        s = set(indices)
        b = {t: v for t, v in self.beta.items() if t not in s}
        g = {t: v for t, v in self.gamma.items() if t not in s}
        for t in s:
            if t in self.gamma:
                b[t] = self.gamma[t]
            if t in self.beta:
                g[t] = self.beta[t]
        return FirstOrderOperator(self.registry, b, g)

    def max_abs(self) -> float:
        vals = list(self.beta.values()) + list(self.gamma.values())
        return max((abs(complex(v)) for v in vals), default=0.0)

    def __call__(self, f: GrassmannElement) -> GrassmannElement:
        return apply(self, f)

    def __repr__(self):
        reg = self.registry
        parts = []
        for t in sorted(self.support()):
            name = reg.format_label(reg.label(t))
            if t in self.beta:
                parts.append(f"{self.beta[t]}*d_{name}")
            if t in self.gamma:
                parts.append(f"{self.gamma[t]}*x_{name}")
        return "FirstOrderOperator(" + " + ".join(parts or ["0"]) + ")"


def apply(D: FirstOrderOperator, f: GrassmannElement) -> GrassmannElement:
    if D.registry is not f.registry and D.registry != f.registry:
        raise RegistryMismatchError("operator and element over different registries")
    out = f.registry.zero()
    for t, b in D.beta.items():
        out = out + f.left_derivative(t).scale(b)
    for t, g in D.gamma.items():
        out = out + f.left_multiply_generator(t).scale(g)
    return out


def pairing(D1: FirstOrderOperator, D2: FirstOrderOperator):
    """Anticommutator scalar ``sum_t (b1 g2 + b2 g1)``."""
    D1._check(D2)
    s = 0
    for t, b in D1.beta.items():
        g = D2.gamma.get(t)
        if g is not None:
            s = s + b * g
    for t, b in D2.beta.items():
        g = D1.gamma.get(t)
        if g is not None:
            s = s + b * g
    return s


@dataclass(frozen=True)
class OperatorSpace:
    """Span of a list of operators over one registry."""

    basis: tuple[FirstOrderOperator, ...]

    def __init__(self, basis: Iterable[FirstOrderOperator]):
        object.__setattr__(self, "basis", tuple(basis))
        if any(b.registry != self.basis[0].registry for b in self.basis[1:]):
            raise RegistryMismatchError("basis operators over different registries")

    @property
    def registry(self) -> GeneratorRegistry:
        return self.basis[0].registry

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def support(self) -> list[int]:
        s: set[int] = set()
        for b in self.basis:
            s |= b.support()
        return sorted(s)

    def matrix(self, indices: Sequence[int] | None = None) -> list[list]:
        return [b.to_vector(indices) for b in self.basis]

    def rank(self, field: Field = EXACT) -> int:
        return linalg.rank(self.matrix(), field)

    def is_independent(self, field: Field = EXACT) -> bool:
        return self.rank(field) == len(self.basis)

    def gram(self) -> list[list]:
        return [[pairing(a, b) for b in self.basis] for a in self.basis]

    def max_pairing(self) -> float:
        return max((abs(complex(v)) for row in self.gram() for v in row), default=0.0)

    def contains(self, D: FirstOrderOperator, field: Field = EXACT) -> bool:
        m = self.matrix()
        return linalg.rank(m + [D.to_vector()], field) == linalg.rank(m, field)


def is_isotropic(S: OperatorSpace, field: Field = EXACT) -> bool:
    """Every pairing of basis operators, self-pairings included, vanishes."""
    return all(field.is_zero(v) for row in S.gram() for v in row)


def _action_matrix(V: OperatorSpace, gens: Sequence[int]) -> tuple[list[list], list[int]]:
    """Stacked matrix of ``W -> (D W for D in V)`` on the subalgebra generated by ``gens``."""
    reg = V.registry
    masks = _submasks(gens)
    col_of = {m: k for k, m in enumerate(masks)}
    rows = []
    for D in V.basis:
        images = [apply(D, GrassmannElement(reg, {m: 1})) for m in masks]
        for out_mask in masks:
            row = [img.terms.get(out_mask, 0) for img in images]
            if any(v != 0 for v in row):
                rows.append(row)
    return rows, masks


def _submasks(gens: Sequence[int]) -> list[int]:
    masks = []
    n = len(gens)
    for k in range(1 << n):
        m = 0
        for j in range(n):
            if k >> j & 1:
                m |= 1 << gens[j]
        masks.append(m)
    return sorted(masks)


def _normalize_lowest(terms: dict[int, object], field: Field) -> dict[int, object]:
    lead = terms[min(terms)]
    inv = field.reciprocal(lead)
    return {m: c * inv for m, c in terms.items()}


def annihilator_element(V: OperatorSpace, generators: Sequence[int] | None = None,
                        field: Field = EXACT) -> tuple[GrassmannElement, Parity]:
    """The unique, up to scale, element killed by every operator of ``V``.

    The element lives in the subalgebra generated by ``generators`` (default:
    the support of ``V``) and is normalised so the coefficient of its lowest
    canonical mask is 1.
    """
    gens = list(V.support() if generators is None else generators)
    rows, masks = _action_matrix(V, gens)
    kernel = linalg.nullspace(rows, len(masks), field)
    if len(kernel) != 1:
        raise DegenerateError(f"annihilated subspace has dimension {len(kernel)}, expected 1")
    vec = kernel[0]
    terms = {m: c for m, c in zip(masks, vec) if not field.is_zero(c)}
    terms = _normalize_lowest(terms, field)
    W = GrassmannElement(V.registry, terms)
    return W, W.parity()


@dataclass(frozen=True)
class GaussianCoefficients:
    """Antisymmetric matrix ``alpha[a][b]`` over generator indices ``labels``."""

    indices: tuple[int, ...]
    alpha: tuple[tuple, ...]

    def quadratic_form(self, registry: GeneratorRegistry) -> GrassmannElement:
        """``(1/2) sum alpha_ab x_a x_b = sum_{a<b} alpha_ab x_a x_b``."""
        terms = {}
        n = len(self.indices)
        for a in range(n):
            for b in range(a + 1, n):
                ia, ib = self.indices[a], self.indices[b]
                c = self.alpha[a][b]
                if ia > ib:
                    c = -c
                m = (1 << ia) | (1 << ib)
                terms[m] = terms.get(m, 0) + c
        return GrassmannElement(registry, terms)

    def weight(self, registry: GeneratorRegistry) -> GrassmannElement:
        return exponential(self.quadratic_form(registry))

    def rank(self, field: Field = EXACT) -> int:
        return linalg.rank([list(r) for r in self.alpha], field)


def gaussian_space(registry: GeneratorRegistry, indices: Sequence[int], alpha: Sequence[Sequence]) -> OperatorSpace:
    """The operators ``d_t - sum_t' alpha_tt' x_t'`` that kill ``exp((1/2) alpha x x)``."""
    ops = []
    for a, t in enumerate(indices):
        ops.append(FirstOrderOperator(registry, {t: 1},
                                      {tp: -alpha[a][b] for b, tp in enumerate(indices)}))
    return OperatorSpace(ops)


def gaussian_coefficients(V: OperatorSpace, generators: Sequence[int] | None = None,
                          field: Field = EXACT) -> GaussianCoefficients:
    """Recover ``alpha = -B^{-1} Gamma`` from a basis written as ``(B | Gamma)``."""
    gens = list(V.support() if generators is None else generators)
    n = len(gens)
    if len(V) != n:
        raise DegenerateError(f"need {n} operators, got {len(V)}")
    B = [[D.beta.get(t, 0) for t in gens] for D in V.basis]
    G = [[D.gamma.get(t, 0) for t in gens] for D in V.basis]
    try:
        X = linalg.solve(B, G, field)
    except ZeroDivisionError:
        raise DegenerateError("derivative block is singular: odd or degenerate component, "
                              "weight is not a Gaussian exponent") from None
    alpha = tuple(tuple(-v for v in row) for row in X)
    for a in range(n):
        for b in range(a, n):
            if not field.is_zero(alpha[a][b] + alpha[b][a]):
                raise DegenerateError("recovered coefficient matrix is not antisymmetric; "
                                      "space is not isotropic")
    return GaussianCoefficients(tuple(gens), alpha)


def annihilator_space(f: GrassmannElement, generators: Sequence[int], field: Field = EXACT) -> OperatorSpace:
    """All operators supported on ``generators`` that kill ``f``."""
    reg = f.registry
    gens = list(generators)
    n = len(gens)
    images = []
    for t in gens:
        images.append(f.left_derivative(t))
    for t in gens:
        images.append(f.left_multiply_generator(t))
    masks = sorted(set().union(*(img.terms for img in images))) if images else []
    rows = [[img.terms.get(m, 0) for img in images] for m in masks]
    kernel = linalg.nullspace(rows, 2 * n, field)
    return OperatorSpace([FirstOrderOperator.from_vector(reg, v, gens) for v in kernel])
