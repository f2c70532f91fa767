"""The 18-parameter family of Gaussian weights satisfying the 3-3 relation.

The nine boundary tetrahedra of the 3-3 move form a 3x3 table: rows are the
left-hand pentachora, columns the right-hand ones, and each cell is the
tetrahedron they share.  From nine scales ``kappa``, six row/column angles
and three Euler angles we build a 9-dimensional isotropic operator space
``V9`` and then split it into six 5-dimensional spaces, one per pentachoron.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .complexes import MoveInstance, Simplex, builtin_move, faces
from .errors import ComponentError, DegenerateError
from .grassmann import GeneratorRegistry, Parity
from .operators import (FirstOrderOperator, GaussianCoefficients, OperatorSpace,
                        annihilator_element, gaussian_coefficients, pairing)
from .scalars import FLOAT, CirclePoint, Field, circle_point, random_rational
from .weights import WeightAssignment

ROWS: tuple[Simplex, ...] = ((1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 5, 6))
COLS: tuple[Simplex, ...] = ((1, 2, 4, 5, 6), (1, 3, 4, 5, 6), (2, 3, 4, 5, 6))


def cell(r: int, c: int) -> Simplex:
    return tuple(sorted(set(ROWS[r]) & set(COLS[c])))


TABLE: tuple[tuple[Simplex, ...], ...] = tuple(tuple(cell(r, c) for c in range(3)) for r in range(3))
CELLS: tuple[Simplex, ...] = tuple(t for row in TABLE for t in row)


@dataclass(frozen=True)
class FamilyParameters:
    """``kappa`` per table cell, one circle point per row, per column, and per Euler angle."""

    kappa: dict
    lam: tuple[CirclePoint, CirclePoint, CirclePoint]
    mu: tuple[CirclePoint, CirclePoint, CirclePoint]
    euler: tuple[CirclePoint, CirclePoint, CirclePoint]

    def __post_init__(self):
        if set(self.kappa) != set(CELLS):
            raise ValueError("kappa must be given for exactly the nine table tetrahedra")
        if any(k == 0 for k in self.kappa.values()):
            raise DegenerateError("kappa must be nonzero")

    @classmethod
    def random(cls, rng) -> "FamilyParameters":
        """Exact rational draw; angles are rational points on the unit circle."""
        kappa = {t: random_rational(rng, nonzero=True) for t in CELLS}
        pts = [circle_point(random_rational(rng)) for _ in range(9)]
        return cls(kappa, tuple(pts[0:3]), tuple(pts[3:6]), tuple(pts[6:9]))

    @classmethod
    def from_angles(cls, kappa: dict, lam: Sequence, mu: Sequence, euler: Sequence) -> "FamilyParameters":
        return cls(dict(kappa), tuple(map(CirclePoint.from_angle, lam)),
                   tuple(map(CirclePoint.from_angle, mu)), tuple(map(CirclePoint.from_angle, euler)))

    def to(self, field: Field) -> "FamilyParameters":
        return FamilyParameters({t: field.coerce(k) for t, k in self.kappa.items()},
                                tuple(p.to(field) for p in self.lam),
                                tuple(p.to(field) for p in self.mu),
                                tuple(p.to(field) for p in self.euler))


def _rot3(p: CirclePoint) -> list[list]:
    return [[p.c, p.s, 0], [-p.s, p.c, 0], [0, 0, 1]]


def _rot1(p: CirclePoint) -> list[list]:
    return [[1, 0, 0], [0, p.c, p.s], [0, -p.s, p.c]]


def euler_matrix(euler: Sequence[CirclePoint]) -> list[list]:
    from .linalg import matmul
    return matmul(matmul(_rot3(euler[0]), _rot1(euler[1])), _rot3(euler[2]))


@dataclass
class FamilyBasis:
    """All named vectors of the construction, plus the isotropic space they span."""

    registry: GeneratorRegistry
    field: Field
    e: dict
    f: dict
    g: dict
    h: dict
    p: dict
    q: dict
    A: list
    rst: list
    rst_sign: int

    @property
    def space(self) -> OperatorSpace:
        return OperatorSpace([self.g[u] for u in ROWS] + [self.h[u] for u in COLS] + list(self.rst))

    def named(self) -> dict[str, FirstOrderOperator]:
        out = {f"g{_name(u)}": self.g[u] for u in ROWS}
        out.update({f"h{_name(u)}": self.h[u] for u in COLS})
        out.update(zip(("r", "s", "t"), self.rst))
        return out


def _name(u: Sequence[int]) -> str:
    return "".join(map(str, u))


def move_registry(move: MoveInstance | None = None) -> GeneratorRegistry:
    """Generators for every tetrahedron of the glued sphere, in ascending order."""
    move = move or builtin_move("3-3")
    return GeneratorRegistry(move.glued.simplices(3))


def build_family_basis(params: FamilyParameters, field: Field = FLOAT,
                       registry: GeneratorRegistry | None = None, rst_sign: int = 1) -> FamilyBasis:
    """Vectors ``e, f, g, h, p, q`` and ``(r, s, t) = p + rst_sign * i A q``."""
    reg = registry or move_registry()
    prm = params.to(field)
    i = field.i
    e, f = {}, {}
    for t in CELLS:
        k = prm.kappa[t]
        ik = field.reciprocal(k)
        e[t] = FirstOrderOperator(reg, {reg.index(t): ik}, {reg.index(t): k})
        f[t] = FirstOrderOperator(reg, {reg.index(t): i * ik}, {reg.index(t): -i * k})
    g, h, p, q = {}, {}, {}, {}
    for u, lam in zip(ROWS, prm.lam):
        a, b, c, d, m = u
        g[u] = e[(a, b, d, m)] + e[(a, c, d, m)].scale(i * lam.c) + e[(b, c, d, m)].scale(i * lam.s)
        p[u] = e[(a, c, d, m)].scale(lam.s) - e[(b, c, d, m)].scale(lam.c)
    for u, mu in zip(COLS, prm.mu):
        a, b, c, d, m = u
        h[u] = f[(a, b, c, d)] + f[(a, b, c, m)].scale(i * mu.c) + f[(a, b, d, m)].scale(i * mu.s)
        q[u] = f[(a, b, c, m)].scale(mu.s) - f[(a, b, d, m)].scale(mu.c)
    A = euler_matrix(prm.euler)
    rst = [_combine([p[u] for u in ROWS][k], [q[u] for u in COLS], A[k], rst_sign * i) for k in range(3)]
    return FamilyBasis(reg, field, e, f, g, h, p, q, A, rst, rst_sign)


def _combine(base: FirstOrderOperator, others: Sequence[FirstOrderOperator], coeffs: Sequence, factor):
    out = base
    for c, D in zip(coeffs, others):
        if c != 0:
            out = out + D.scale(factor * c)
    return out


# -- splitting V9 into per-pentachoron spaces -----------------------------------------

def _indices(reg: GeneratorRegistry, tets: Sequence[Simplex]) -> list[int]:
    return [reg.index(t) for t in tets]


def _zero_component(base: FirstOrderOperator, helper: FirstOrderOperator, t_index: int, field: Field):
    """``base + c * helper`` with the component on generator ``t_index`` removed."""
    hb = helper.beta.get(t_index, 0)
    if field.is_zero(hb):
        raise DegenerateError("cannot clear a table cell: helper vector vanishes there")
    c = -base.beta.get(t_index, 0) * field.reciprocal(hb)
    out = base + helper.scale(c)
    return FirstOrderOperator(out.registry, {k: v for k, v in out.beta.items() if k != t_index},
                              {k: v for k, v in out.gamma.items() if k != t_index})


def _root_key(z):
    re = getattr(z, "re", None)
    if re is not None:
        return (re, z.im)
    z = complex(z)
    return (z.real, z.imag)


def null_pair(u1: FirstOrderOperator, u2: FirstOrderOperator, proj: Sequence[int], field: Field,
              flip: bool = False) -> tuple[FirstOrderOperator, FirstOrderOperator]:
    """Two combinations of ``u1, u2`` whose projections onto ``proj`` are null.

    Roots ``tau/sigma`` are ordered lexicographically by ``(Re, Im)``; the first
    gives ``d`` and the second ``x`` (swapped when ``flip``), and ``x`` is scaled so
    the projections pair to 1.
    """
    a1, a2 = u1.restrict(proj), u2.restrict(proj)
    A, B, C = pairing(a1, a1), pairing(a1, a2), pairing(a2, a2)
    if field.is_zero(C):
        raise DegenerateError("quadratic form on the projection has no tau^2 term")
    disc = B * B - A * C
    if field.is_zero(disc):
        raise DegenerateError("quadratic form on the projection is degenerate")
    root = field.sqrt(disc)
    ic = field.reciprocal(C)
    z1, z2 = sorted(((-B + root) * ic, (-B - root) * ic), key=_root_key)
    if flip:
        z1, z2 = z2, z1
    d = u1 + u2.scale(z1)
    x = u1 + u2.scale(z2)
    m = pairing(d.restrict(proj), x.restrict(proj))
    if field.is_zero(m):
        raise DegenerateError("null directions are orthogonal on the projection")
    return d, x.scale(field.reciprocal(m))


@dataclass
class InnerPiece:
    """Operators contributed by one inner tetrahedron to its two pentachora."""

    tetra: Simplex
    upper: Simplex
    lower: Simplex
    d: FirstOrderOperator
    x: FirstOrderOperator


def _side_pieces(basis: FamilyBasis, side: str, flips: Sequence[bool]) -> list[InnerPiece]:
    reg, field = basis.registry, basis.field
    i = field.i * basis.rst_sign
    A = basis.A
    owners = ROWS if side == "lhs" else COLS
    lines = [TABLE[k] for k in range(3)] if side == "lhs" else [tuple(TABLE[r][k] for r in range(3)) for k in range(3)]
    pieces = []
    for n, (a_lo, a_hi) in enumerate(((0, 1), (0, 2), (1, 2))):
        c = 3 - a_lo - a_hi
        if side == "lhs":
            mods = []
            for m, col in enumerate(COLS):
                mods.append(_zero_component(basis.q[col], basis.h[col], reg.index(TABLE[c][m]), field))
            vec = {k: _combine(basis.p[ROWS[k]], mods, A[k], i) for k in (a_lo, a_hi)}
        else:
            mods = []
            for k, row in enumerate(ROWS):
                mods.append(_zero_component(basis.p[row], basis.g[row], reg.index(TABLE[k][c]), field))
            At = [[A[k][m] for k in range(3)] for m in range(3)]
            vec = {m: _combine(basis.q[COLS[m]].scale(i), mods, At[m], 1) for m in (a_lo, a_hi)}
        # Row/column ``a_hi`` is the lower one; its projection fixes the normalisation.
        d, x = null_pair(vec[a_lo], vec[a_hi], _indices(reg, lines[a_hi]), field, bool(flips[n]))
        tetra = tuple(sorted(set(owners[a_lo]) & set(owners[a_hi])))
        pieces.append(InnerPiece(tetra, owners[a_lo], owners[a_hi], d, x))
    return pieces


def _pentachoron_space(basis: FamilyBasis, u: Simplex, pieces: Sequence[InnerPiece], side: str) -> OperatorSpace:
    reg = basis.registry
    lines = TABLE if side == "lhs" else tuple(tuple(TABLE[r][k] for r in range(3)) for k in range(3))
    owners = ROWS if side == "lhs" else COLS
    proj = _indices(reg, lines[owners.index(u)])
    ops = [basis.g[u] if side == "lhs" else basis.h[u]]
    for pc in pieces:
        if u not in (pc.upper, pc.lower):
            continue
        xs = -1 if u == pc.lower else 1
        ops.append(FirstOrderOperator.d(reg, pc.tetra) + pc.d.restrict(proj))
        ops.append(FirstOrderOperator.x(reg, pc.tetra) + pc.x.restrict(proj).scale(xs))
    return OperatorSpace(ops)


@dataclass
class FamilyWeights:
    """Per-pentachoron spaces, Gaussian coefficients and weights from one ``V9``."""

    assignment: WeightAssignment
    spaces: dict[Simplex, OperatorSpace]
    gaussians: dict[Simplex, GaussianCoefficients]
    parities: dict[Simplex, Parity]
    flips: dict[Simplex, bool]


def _split_side(basis: FamilyBasis, side: str):
    owners = ROWS if side == "lhs" else COLS
    reg, field = basis.registry, basis.field
    last_parities = None
    for flips in itertools.product((False, True), repeat=3):
        pieces = _side_pieces(basis, side, flips)
        spaces = {u: _pentachoron_space(basis, u, pieces, side) for u in owners}
        parities = {}
        for u, V in spaces.items():
            gens = _indices(reg, faces(u, 3))
            parities[u] = annihilator_element(V, gens, field)[1]
        last_parities = parities
        if all(pv is Parity.EVEN for pv in parities.values()):
            return spaces, parities, {pc.tetra: fl for pc, fl in zip(pieces, flips)}
    raise ComponentError(f"no choice of null directions gives even weights on the {side}; "
                         f"parities {sorted((u, p.value) for u, p in last_parities.items())}")


def derive_simplex_weights(basis: FamilyBasis) -> FamilyWeights:
    """Even Gaussian weights for all six pentachora whose 5-dimensional spaces come from ``V9``."""
    reg, field = basis.registry, basis.field
    spaces, parities, flips, gaussians, weights, forms = {}, {}, {}, {}, {}, {}
    for side in ("lhs", "rhs"):
        s, par, fl = _split_side(basis, side)
        spaces.update(s)
        parities.update(par)
        flips.update(fl)
    for u, V in spaces.items():
        gc = gaussian_coefficients(V, _indices(reg, faces(u, 3)), field)
        gaussians[u] = gc
        forms[u] = gc.quadratic_form(reg)
        weights[u] = gc.weight(reg)
    assignment = WeightAssignment(reg, weights, forms, {u: 0 for u in weights})
    return FamilyWeights(assignment, spaces, gaussians, parities, flips)
