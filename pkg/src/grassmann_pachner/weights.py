"""Explicit 4-simplex weights built from vertex coordinates.

Two face-factor rules are available and never mixed within one run:

* ``family=1``: one coordinate per vertex, tangent-difference triple product;
* ``family=2``: three coordinates per vertex, 3x3 determinant.

Grassmann generators are tetrahedra (ascending 4-tuples of vertex labels).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import MoveInstance, Simplex, Triangulation, faces, perm_sign
from .errors import DegenerateError
from .grassmann import GeneratorRegistry, GrassmannElement, exponential
from .operators import FirstOrderOperator


def _sorted_sign(ijk: Sequence[int]) -> tuple[Simplex, int]:
    return tuple(sorted(ijk)), perm_sign(ijk)


def face_factor_1(i: int, j: int, k: int, coords: Mapping[int, Sequence]):
    """Tangent-difference product ``prod (x_a - x_b)/(1 + x_a x_b)`` over the cycle i->j->k->i."""
    xi, xj, xk = coords[i][0], coords[j][0], coords[k][0]
    out = Fraction(1)
    for a, b in ((xi, xj), (xj, xk), (xk, xi)):
        den = 1 + a * b
        if den == 0:
            raise DegenerateError(f"1 + xi xi' vanishes on face {(i, j, k)}")
        out = out * (a - b) / den
    return out


def face_factor_3(i: int, j: int, k: int, coords: Mapping[int, Sequence]):
    """Determinant with columns ``(xi, eta, zeta)`` of vertices i, j, k."""
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = coords[i], coords[j], coords[k]
    return (a1 * (b2 * c3 - b3 * c2)
            - b1 * (a2 * c3 - a3 * c2)
            + c1 * (a2 * b3 - a3 * b2))


class FaceFactorTable:
    """Cached face factors keyed by ascending triples; access applies the permutation sign."""

    def __init__(self, coords: Mapping[int, Sequence], family: int):
        if family not in (1, 2):
            raise ValueError("family must be 1 or 2")
        need = 1 if family == 1 else 3
        for v, c in coords.items():
            if len(c) != need:
                raise ValueError(f"family {family} needs {need} coordinate(s) per vertex; vertex {v} has {len(c)}")
        self.coords = dict(coords)
        self.family = family
        self._rule = face_factor_1 if family == 1 else face_factor_3
        self._cache: dict[Simplex, object] = {}

    def value(self, face: Simplex):
        """Value on an ascending triple."""
        v = self._cache.get(face)
        if v is None:
            v = self._rule(*face, self.coords)
            self._cache[face] = v
        return v

    def __call__(self, i: int, j: int, k: int):
        face, s = _sorted_sign((i, j, k))
        v = self.value(face)
        return v if s > 0 else -v

    def nonzero(self, i, j, k):
        v = self(i, j, k)
        if v == 0:
            raise DegenerateError(f"face factor of {(i, j, k)} vanishes")
        return v


def tetra_registry(T: Triangulation) -> GeneratorRegistry:
    return GeneratorRegistry(T.simplices(3))


def quadratic_form(u: Simplex, phi: FaceFactorTable, orientation: int,
                   registry: GeneratorRegistry) -> GrassmannElement:
    """Sum over 2-faces ``abc`` of ``u`` of ``eps(d1 a b c d2) phi_abc x_{abcd1} x_{abcd2}``."""
    u = tuple(sorted(u))
    terms = {}
    for abc in faces(u, 2):
        d1, d2 = [v for v in u if v not in abc]
        eps = orientation * perm_sign((d1,) + abc + (d2,))
        t1 = tuple(sorted(abc + (d1,)))
        t2 = tuple(sorted(abc + (d2,)))
        i1, i2 = registry.index(t1), registry.index(t2)
        c = eps * phi.value(abc)
        if i1 > i2:
            c = -c
        m = (1 << i1) | (1 << i2)
        terms[m] = terms.get(m, 0) + c
    return GrassmannElement(registry, terms)


def form_matrix(Phi: GrassmannElement, indices: Sequence[int]) -> list[list]:
    """Antisymmetric coefficient matrix ``a`` with ``Phi = sum_{a<b} a_ab x_a x_b``."""
    n = len(indices)
    M = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            ia, ib = indices[a], indices[b]
            m = (1 << ia) | (1 << ib)
            c = Phi.terms.get(m, 0)
            if ia > ib:
                c = -c
            M[a][b] = c
            M[b][a] = -c
    return M


def weight_family1(u: Simplex, phi: FaceFactorTable, orientation: int,
                   registry: GeneratorRegistry) -> GrassmannElement:
    return exponential(quadratic_form(u, phi, orientation, registry))


def weight_family2(u: Simplex, phi: FaceFactorTable, orientation: int,
                   registry: GeneratorRegistry, h=0) -> GrassmannElement:
    return quadratic_form(u, phi, orientation, registry) + h


@dataclass
class WeightAssignment:
    """Per-pentachoron weights with their quadratic forms and free terms."""

    registry: GeneratorRegistry
    weights: dict[Simplex, GrassmannElement]
    forms: dict[Simplex, GrassmannElement]
    free_terms: dict[Simplex, object]

    def __getitem__(self, u) -> GrassmannElement:
        return self.weights[tuple(u)]


def assign_weights(T: Triangulation, phi: FaceFactorTable, registry: GeneratorRegistry,
                   h: Mapping[Simplex, object] | None = None) -> WeightAssignment:
    """Weights for every pentachoron of ``T``: ``exp(Phi)`` (family 1) or ``h + Phi`` (family 2)."""
    weights, forms, free = {}, {}, {}
    for u, s in T.signs.items():
        Phi = quadratic_form(u, phi, s, registry)
        forms[u] = Phi
        if phi.family == 1:
            weights[u] = exponential(Phi)
            free[u] = 0
        else:
            hu = 0 if h is None else h.get(u, 0)
            weights[u] = Phi + hu
            free[u] = hu
    return WeightAssignment(registry, weights, forms, free)


# -- exotic-homology entries --------------------------------------------------

def g3_entry(edge: Sequence[int], u: Sequence[int], phi: FaceFactorTable):
    """``1 / (phi_ijk phi_ijl phi_ijm)`` for the ascending edge ``ij`` inside ``u``."""
    i, j = sorted(edge)
    rest = [v for v in sorted(u) if v not in (i, j)]
    den = 1
    for k in rest:
        den = den * phi.nonzero(i, j, k)
    return Fraction(1) / den if not isinstance(den, complex) else 1 / den


def g4_entry(edge: Sequence[int], u: Sequence[int], phi: FaceFactorTable, T: Triangulation):
    """``eps_{ijklm} phi_klm`` for the ascending edge ``ij`` inside ``u``."""
    i, j = sorted(edge)
    k, l, m = [v for v in sorted(u) if v not in (i, j)]
    return T.epsilon((i, j, k, l, m)) * phi(k, l, m)


def allowable_h(move: MoveInstance, edge_chain: Mapping[Simplex, object],
                phi: FaceFactorTable) -> dict[Simplex, object]:
    """Image of an edge chain of the glued sphere under g3: one ``h`` per pentachoron."""
    out = {}
    for u in move.glued.pentachora:
        total = 0
        for b in faces(u, 1):
            c = edge_chain.get(b, 0)
            if c != 0:
                total = total + c * g3_entry(b, u, phi)
        out[u] = total
    return out


def h_linear(u: Sequence[int], coords: Mapping[int, Sequence], a, b, c, vertices=range(1, 7)):
    """Free term ``a xi_n + b eta_n + c zeta_n`` with ``n`` the vertex missing from ``u``."""
    (n,) = [v for v in vertices if v not in u]
    xi, eta, zeta = coords[n]
    return a * xi + b * eta + c * zeta


# -- edge operators ----------------------------------------------------------

def edge_operator(edge: Sequence[int], T: Triangulation, phi: FaceFactorTable,
                  registry: GeneratorRegistry) -> FirstOrderOperator:
    """``sum over tetrahedra {ijkl} of T containing ij of d_t / (phi_ijk phi_ijl)``."""
    i, j = sorted(edge)
    beta = {}
    for t in T.simplices(3):
        if i in t and j in t:
            k, l = [v for v in t if v not in (i, j)]
            den = phi.nonzero(i, j, k) * phi.nonzero(i, j, l)
            beta[registry.index(t)] = 1 / den if isinstance(den, complex) else Fraction(1) / den
    return FirstOrderOperator(registry, beta, {})


def edge_weight(edge: Sequence[int], T: Triangulation, phi: FaceFactorTable,
                registry: GeneratorRegistry) -> GrassmannElement:
    """``phi_ijk phi_ijl x_{ijkl}`` for the lexicographically first tetrahedron on the edge."""
    i, j = sorted(edge)
    tets = [t for t in T.simplices(3) if i in t and j in t]
    if not tets:
        raise DegenerateError(f"edge {(i, j)} lies in no tetrahedron")
    t = tets[0]
    k, l = [v for v in t if v not in (i, j)]
    return registry.generator(t, phi(i, j, k) * phi(i, j, l))


# -- explicit isotropic vectors for family 1 ------------------------------------

def _r_s(t: Simplex, xi: Mapping[int, object]):
    """Auxiliary ``r_t, s_t``; ``t = ijkl`` ascending, split as ``{i,j} | {k,l}``."""
    i, j, k, l = (xi[v] for v in t)
    num_r = (i * j + 1) * (k * l + 1) * (i * j * k * l - k * l + j * l + i * l + j * k + i * k - i * j + 1)
    den_r = (k - i) * (k - j) * (l - i) * (l - j)
    num_s = (j - i) * (l - k) * (j * k * l + i * k * l - i * j * l - i * j * k + l + k - j - i)
    den_s = (i * k + 1) * (j * k + 1) * (i * l + 1) * (j * l + 1)
    if den_r == 0 or den_s == 0:
        raise DegenerateError(f"auxiliary quantities for {t} have a vanishing denominator")
    return Fraction(num_r) / den_r, -Fraction(num_s) / den_s


def explicit_isotropic_vectors(u: Sequence[int], coords: Mapping[int, Sequence],
                               registry: GeneratorRegistry, move: MoveInstance) -> FirstOrderOperator:
    """Closed-form annihilating vector of the family-1 weight on a move pentachoron.

    On its three boundary tetrahedra (ascending) the vector is ``r d + c s x``
    with ``c = -p_u * (+1, -1, +1)`` on the left-hand side and
    ``c = -p_u * (-1, +1, -1)`` on the right-hand side, ``p_u`` being the
    orientation sign of ``u`` within its side.
    """
    u = tuple(sorted(u))
    xi = {v: c[0] for v, c in coords.items()}
    if u in move.lhs.signs:
        p = move.lhs.signs[u]
        pattern = tuple(-p * c for c in (1, -1, 1))
    elif u in move.rhs.signs:
        p = move.rhs.signs[u]
        pattern = tuple(-p * c for c in (-1, 1, -1))
    else:
        raise ValueError(f"{u} is not a pentachoron of the move")
    tets = sorted(t for t in faces(u, 3) if t in move.boundary)
    if len(tets) != 3:
        raise ValueError(f"{u} does not have three boundary tetrahedra")
    beta, gamma = {}, {}
    for sgn, t in zip(pattern, tets):
        r, s = _r_s(t, xi)
        beta[registry.index(t)] = r
        gamma[registry.index(t)] = sgn * s
    return FirstOrderOperator(registry, beta, gamma)
