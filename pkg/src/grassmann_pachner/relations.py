"""End-to-end checks of the Pachner-move relations.

Each check assembles the weights of both sides of a move, integrates out
the inner tetrahedra and compares the results as Grassmann elements over
the boundary generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .complexes import MoveInstance, Simplex, builtin_move
from .errors import DegenerateError
from .family import (COLS, ROWS, FamilyBasis, FamilyParameters, FamilyWeights, build_family_basis,
                     derive_simplex_weights, move_registry)
from .grassmann import GeneratorRegistry, GrassmannElement
from .operators import OperatorSpace, annihilator_space, apply, is_isotropic
from .scalars import DEFAULT_REL_TOL, EXACT, FLOAT, Field, is_exact
from .weights import FaceFactorTable, WeightAssignment, allowable_h, assign_weights, edge_weight

INNER_33_LHS: tuple[Simplex, ...] = ((1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 3, 6))
INNER_33_RHS: tuple[Simplex, ...] = ((1, 4, 5, 6), (2, 4, 5, 6), (3, 4, 5, 6))
INNER_24_LHS: tuple[Simplex, ...] = ((1, 2, 3, 4),)
INNER_24_RHS: tuple[Simplex, ...] = ((1, 2, 5, 6), (1, 3, 5, 6), (1, 4, 5, 6),
                                     (2, 3, 5, 6), (2, 4, 5, 6), (3, 4, 5, 6))


@dataclass
class RelationReport:
    """Both sides of a relation, the comparison, and auxiliary diagnostics."""

    lhs_value: GrassmannElement
    rhs_value: GrassmannElement
    equal: bool
    const_ratio: object = None
    residual: float = 0.0
    details: dict = dc_field(default_factory=dict)

    def summary(self) -> dict:
        out = {"equal": self.equal, "residual": self.residual,
               "lhs_terms": len(self.lhs_value), "rhs_terms": len(self.rhs_value)}
        if self.const_ratio is not None:
            out["const_ratio"] = _fmt_scalar(self.const_ratio)
        out.update(self.details)
        return out


def _fmt_scalar(c) -> str:
    if isinstance(c, complex):
        return f"{c.real:.12g}{c.imag:+.12g}j"
    if isinstance(c, float):
        return f"{c:.12g}"
    return str(c)


def _integral(weights: Sequence[GrassmannElement], inner: Sequence[Simplex], reg: GeneratorRegistry,
              extra: GrassmannElement | None = None) -> GrassmannElement:
    prod = reg.one()
    for W in weights:
        prod = prod * W
    if extra is not None:
        prod = prod * extra
    return prod.integrate([reg.index(t) for t in inner])


def _relative_difference(a: GrassmannElement, b: GrassmannElement) -> float:
    scale = max(a.max_abs(), b.max_abs())
    return 0.0 if scale == 0 else (a - b).max_abs() / scale


def _compare(lhs: GrassmannElement, rhs: GrassmannElement, field: Field) -> tuple[bool, float]:
    res = _relative_difference(lhs, rhs)
    if field is EXACT or (is_exact_element(lhs) and is_exact_element(rhs)):
        return lhs == rhs, res
    return res < getattr(field, "rel_tol", DEFAULT_REL_TOL), res


def is_exact_element(f: GrassmannElement) -> bool:
    return all(is_exact(c) for c in f.terms.values())


def _shape(f: GrassmannElement) -> dict:
    return {"degrees": sorted(f.degrees()), "parity": f.parity().value}


def verify_33(family: int, coords: Mapping[int, Sequence], h: Mapping[Simplex, object] | None = None,
              field: Field = EXACT) -> RelationReport:
    """``(1/phi_123) int W W W = -(1/phi_456) int W W W`` for an explicit weight family."""
    move = builtin_move("3-3")
    phi = FaceFactorTable(coords, family)
    reg = move_registry(move)
    p123, p456 = phi.nonzero(1, 2, 3), phi.nonzero(4, 5, 6)
    L = assign_weights(move.lhs, phi, reg, h)
    R = assign_weights(move.rhs, phi, reg, h)
    lhs = _integral([L[u] for u in ROWS], INNER_33_LHS, reg) / p123
    rhs = -_integral([R[u] for u in COLS], INNER_33_RHS, reg) / p456
    equal, res = _compare(lhs, rhs, field)
    return RelationReport(lhs, rhs, equal, None, res,
                          {"lhs_shape": _shape(lhs), "rhs_shape": _shape(rhs)})


def verify_24(coords: Mapping[int, Sequence], edge_chain: Mapping[Simplex, object] | None = None,
              w_choice: GrassmannElement | None = None, field: Field = EXACT) -> RelationReport:
    """Family-2 relation for the 2-4 move with the edge factor ``w_56`` on the right.

    ``w_choice`` replaces the default edge weight; ``h`` is the g3 image of
    ``edge_chain`` on the glued sphere (zero when the chain is omitted).
    """
    move = builtin_move("2-4")
    phi = FaceFactorTable(coords, 2)
    reg = move_registry(move)
    h = allowable_h(move, edge_chain or {}, phi)
    L = assign_weights(move.lhs, phi, reg, h)
    R = assign_weights(move.rhs, phi, reg, h)
    w = edge_weight((5, 6), move.rhs, phi, reg) if w_choice is None else w_choice
    pre = phi.nonzero(1, 5, 6) * phi.nonzero(2, 5, 6) * phi.nonzero(3, 5, 6) * phi.nonzero(4, 5, 6)
    lhs = _integral([L[u] for u in sorted(move.lhs.signs)], INNER_24_LHS, reg)
    rhs = -_integral([R[u] for u in sorted(move.rhs.signs)], INNER_24_RHS, reg, w) / pre
    equal, res = _compare(lhs, rhs, field)
    return RelationReport(lhs, rhs, equal, None, res,
                          {"lhs_shape": _shape(lhs), "rhs_shape": _shape(rhs)})


def _max_annihilation(V: OperatorSpace, f: GrassmannElement) -> float:
    fm = f.max_abs()
    if fm == 0:
        return 0.0
    return max((apply(D, f).max_abs() / (D.max_abs() * fm) for D in V), default=0.0)


def verify_33_general(weights: WeightAssignment | Mapping[Simplex, GrassmannElement],
                      V9: OperatorSpace | None = None, field: Field = FLOAT) -> RelationReport:
    """Proportionality of the two 3-3 integrals with an unknown constant.

    ``const_ratio`` is ``lhs / rhs`` read off at the largest right-hand
    coefficient; ``residual`` is ``max|lhs - const * rhs| / max|lhs|``.
    """
    W = weights.weights if isinstance(weights, WeightAssignment) else dict(weights)
    reg = next(iter(W.values())).registry
    lhs = _integral([W[u] for u in ROWS], INNER_33_LHS, reg)
    rhs = _integral([W[u] for u in COLS], INNER_33_RHS, reg)
    if not lhs.terms and not rhs.terms:
        raise DegenerateError("both sides vanish; the constant is undefined")
    if not lhs.terms or not rhs.terms:
        return RelationReport(lhs, rhs, False, None, 1.0)
    m = max(sorted(rhs.terms), key=lambda k: abs(complex(rhs.terms[k])))
    ratio = lhs.terms.get(m, 0) / rhs.terms[m]
    diff = lhs - rhs.scale(ratio)
    res = diff.max_abs() / lhs.max_abs()
    if field is EXACT:
        equal = not diff.terms
    else:
        equal = res < field.rel_tol
    details = {"lhs_shape": _shape(lhs), "rhs_shape": _shape(rhs)}
    if V9 is not None:
        details["v9_lhs_residual"] = _max_annihilation(V9, lhs)
        details["v9_rhs_residual"] = _max_annihilation(V9, rhs)
    return RelationReport(lhs, rhs, equal, ratio, res, details)


def boundary_annihilator(f: GrassmannElement, move: MoveInstance, field: Field = EXACT) -> OperatorSpace:
    """Operators on the move's boundary generators that kill ``f``."""
    reg = f.registry
    return annihilator_space(f, [reg.index(t) for t in sorted(move.boundary)], field)


# -- the 18-parameter family end to end ------------------------------------------------

@dataclass
class FamilyRun:
    params: FamilyParameters
    basis: FamilyBasis
    weights: FamilyWeights
    report: RelationReport
    basis_max_pairing: float
    annihilation_residuals: dict


def run_family(params: FamilyParameters, field: Field = FLOAT, rst_sign: int = 1) -> FamilyRun:
    """Build ``V9``, split it into six weights and verify the 3-3 relation."""
    basis = build_family_basis(params, field, rst_sign=rst_sign)
    V9 = basis.space
    fw = derive_simplex_weights(basis)
    res = {u: _max_annihilation(V, fw.assignment[u]) for u, V in fw.spaces.items()}
    report = verify_33_general(fw.assignment, V9, field)
    return FamilyRun(params, basis, fw, report, V9.max_pairing(), res)


def run_family_resampling(rng, field: Field = FLOAT, attempts: int = 8, rst_sign: int = 1) -> FamilyRun:
    """:func:`run_family` on random parameters, redrawing degenerate draws up to ``attempts`` times."""
    last = None
    for _ in range(attempts):
        try:
            return run_family(FamilyParameters.random(rng), field, rst_sign)
        except (DegenerateError, ZeroDivisionError) as exc:
            last = exc
    raise DegenerateError(f"degenerate parameters after {attempts} draws: {last}")


def family_basis_isotropic(basis: FamilyBasis) -> bool:
    return is_isotropic(basis.space, basis.field)

