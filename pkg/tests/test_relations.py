from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grassmann_pachner.checks import general_coords, random_edge_kernel_element
from grassmann_pachner.complexes import builtin_move
from grassmann_pachner.errors import DegenerateError
from grassmann_pachner.family import COLS, ROWS, move_registry
from grassmann_pachner.grassmann import Parity
from grassmann_pachner.homology import random_edge_chain, zero_edge_chain
from grassmann_pachner.operators import apply, is_isotropic
from grassmann_pachner.relations import (INNER_24_RHS, INNER_33_LHS, boundary_annihilator, verify_24,
                                         verify_33, verify_33_general)
from grassmann_pachner.scalars import EXACT
from grassmann_pachner.weights import FaceFactorTable, allowable_h, assign_weights, edge_weight

seeds = st.integers(0, 2 ** 32 - 1)


def _family1_assignment(coords):
    move = builtin_move("3-3")
    phi = FaceFactorTable(coords, 1)
    reg = move_registry(move)
    W = dict(assign_weights(move.lhs, phi, reg).weights)
    W.update(assign_weights(move.rhs, phi, reg).weights)
    return W, phi, reg


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_family1_33_exact(seed):
    rep = verify_33(1, general_coords(np.random.default_rng(seed), 1))
    assert rep.equal and rep.residual == 0.0
    assert rep.lhs_value.parity() is Parity.ODD
    # the sides are odd but not homogeneous
    assert rep.lhs_value.degrees() == {1, 3, 5, 7}


def test_family1_33_sides_do_not_cancel():
    coords = general_coords(np.random.default_rng(2), 1)
    rep = verify_33(1, coords)
    assert rep.lhs_value == rep.rhs_value
    assert rep.lhs_value != -rep.rhs_value


def test_family2_zero_chain_is_pure_cubic():
    coords = general_coords(np.random.default_rng(5), 2)
    rep = verify_33(2, coords)
    assert rep.equal and rep.lhs_value.degrees() == {3}


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_family2_random_chains(seed):
    rng = np.random.default_rng(seed)
    coords = general_coords(rng, 2)
    chain = random_edge_chain(builtin_move("3-3").glued, rng)
    h = allowable_h(builtin_move("3-3"), chain, FaceFactorTable(coords, 2))
    r33 = verify_33(2, coords, h)
    assert r33.equal and r33.lhs_value.parity() is Parity.ODD
    assert r33.lhs_value.degrees() <= {1, 3}
    r24 = verify_24(coords, chain)
    assert r24.equal and r24.lhs_value.parity() is Parity.ODD


def test_verify_24_zero_chain_and_summary():
    coords = general_coords(np.random.default_rng(6), 2)
    rep = verify_24(coords, zero_edge_chain(builtin_move("2-4").glued))
    assert rep.equal and rep.residual == 0.0
    s = rep.summary()
    assert s["equal"] is True and s["lhs_shape"]["parity"] == "odd"


def test_chain_on_edge_56_is_invisible():
    coords = general_coords(np.random.default_rng(7), 2)
    base = verify_24(coords)
    only56 = verify_24(coords, {(5, 6): Fraction(17, 3)})
    assert only56.equal
    assert only56.lhs_value == base.lhs_value and only56.rhs_value == base.rhs_value


def test_edge_weight_kernel_invariance():
    rng = np.random.default_rng(8)
    coords = general_coords(rng, 2)
    move = builtin_move("2-4")
    reg = move_registry(move)
    w = edge_weight((5, 6), move.rhs, FaceFactorTable(coords, 2), reg)
    base = verify_24(coords)
    for _ in range(3):
        rep = verify_24(coords, w_choice=w + random_edge_kernel_element(coords, rng))
        assert rep.rhs_value == base.rhs_value


def test_edge_weight_outside_kernel_changes_result():
    coords = general_coords(np.random.default_rng(9), 2)
    move = builtin_move("2-4")
    reg = move_registry(move)
    w = edge_weight((5, 6), move.rhs, FaceFactorTable(coords, 2), reg)
    rep = verify_24(coords, w_choice=w.scale(2))
    assert not rep.equal


def test_coordinate_scaling_invariance():
    coords = general_coords(np.random.default_rng(10), 2)
    scaled = {v: tuple(3 * a for a in c) for v, c in coords.items()}
    assert verify_33(2, scaled).equal and verify_24(scaled).equal


def test_generic_path_with_prefactors_gives_unit_ratio():
    coords = general_coords(np.random.default_rng(11), 1)
    W, phi, _ = _family1_assignment(coords)
    W[ROWS[0]] = W[ROWS[0]] / phi(1, 2, 3)
    W[COLS[0]] = W[COLS[0]].scale(-1) / phi(4, 5, 6)
    rep = verify_33_general(W, field=EXACT)
    assert rep.equal and rep.const_ratio == 1 and rep.residual == 0.0


def test_inner_variable_scaling_scales_the_constant():
    coords = general_coords(np.random.default_rng(12), 1)
    W, _, reg = _family1_assignment(coords)
    base = verify_33_general(W, field=EXACT)
    c = Fraction(5, 2)
    i = reg.index(INNER_33_LHS[0])
    scaled = {u: (w.substitute_scale(i, c) if u in ROWS else w) for u, w in W.items()}
    rep = verify_33_general(scaled, field=EXACT)
    assert rep.equal and rep.const_ratio == c * base.const_ratio


def test_generic_path_rejects_vanishing_sides():
    move = builtin_move("3-3")
    reg = move_registry(move)
    zero = {u: reg.zero() for u in ROWS + COLS}
    with pytest.raises(DegenerateError):
        verify_33_general(zero)


def test_boundary_annihilator():
    coords = general_coords(np.random.default_rng(13), 1)
    rep = verify_33(1, coords)
    move = builtin_move("3-3")
    V = boundary_annihilator(rep.lhs_value, move)
    assert len(V) == 9 and is_isotropic(V)
    assert all(apply(D, rep.rhs_value).is_zero() for D in V)


def test_inner_tetrahedra_are_integrated_out():
    coords = general_coords(np.random.default_rng(14), 2)
    rep = verify_24(coords)
    reg = rep.lhs_value.registry
    inner = {reg.index(t) for t in INNER_24_RHS} | {reg.index((1, 2, 3, 4))}
    for m in rep.rhs_value.terms:
        assert not any(m >> i & 1 for i in inner)
