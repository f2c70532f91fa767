from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grassmann_pachner.checks import general_coords
from grassmann_pachner.complexes import boundary_delta5, builtin_move, faces
from grassmann_pachner.errors import DegenerateError
from grassmann_pachner.family import move_registry
from grassmann_pachner.grassmann import Parity, exponential
from grassmann_pachner.homology import build_chain_maps
from grassmann_pachner.linalg import rank
from grassmann_pachner.operators import FirstOrderOperator, apply, gaussian_space, pairing
from grassmann_pachner.weights import (FaceFactorTable, allowable_h, assign_weights, edge_operator, edge_weight,
                                       explicit_isotropic_vectors, face_factor_1, face_factor_3, form_matrix,
                                       h_linear, quadratic_form, tetra_registry, weight_family1, weight_family2)

seeds = st.integers(0, 2 ** 32 - 1)
U = (1, 2, 3, 4, 5)


def test_face_factor_1_values():
    c = {0: (Fraction(0),), 1: (Fraction(1),), 2: (Fraction(2),)}
    assert face_factor_1(0, 1, 2, c) == Fraction(2, 3)
    assert face_factor_1(1, 0, 2, c) == Fraction(-2, 3)
    assert face_factor_1(0, 0, 2, c) == 0
    with pytest.raises(DegenerateError):
        face_factor_1(0, 1, 2, {0: (Fraction(1),), 1: (Fraction(-1),), 2: (Fraction(2),)})


def test_face_factor_3_values():
    e = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
    assert face_factor_3(1, 2, 3, e) == 1
    assert face_factor_3(1, 3, 2, e) == -1
    assert face_factor_3(1, 1, 3, e) == 0


def test_face_factor_table_signs():
    coords = {v: (Fraction(v), Fraction(v * v), Fraction(v ** 3 + 1)) for v in range(1, 7)}
    phi = FaceFactorTable(coords, 2)
    assert phi(2, 1, 3) == -phi(1, 2, 3)
    assert phi(2, 3, 1) == phi(1, 2, 3)
    with pytest.raises(ValueError):
        FaceFactorTable(coords, 1)
    with pytest.raises(ValueError):
        FaceFactorTable(coords, 3)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([1, 2]))
def test_quadratic_form_structure(seed, family):
    rng = np.random.default_rng(seed)
    coords = general_coords(rng, family)
    phi = FaceFactorTable(coords, family)
    reg = move_registry()
    Phi = quadratic_form(U, phi, 1, reg)
    assert len(Phi) == 10 and Phi.degrees() == {2}
    assert Phi.coefficient([(1, 2, 3, 4), (1, 2, 3, 5)]) == -phi(1, 2, 3)
    assert quadratic_form(U, phi, -1, reg) == -Phi
    M = form_matrix(Phi, [reg.index(t) for t in faces(U, 3)])
    assert all(M[a][b] == -M[b][a] for a in range(5) for b in range(5))
    if family == 2:
        assert rank(M) == 2
        assert (Phi * Phi).is_zero()


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_family1_weight_is_gaussian(seed):
    rng = np.random.default_rng(seed)
    phi = FaceFactorTable(general_coords(rng, 1), 1)
    reg = move_registry()
    W = weight_family1(U, phi, 1, reg)
    Phi = quadratic_form(U, phi, 1, reg)
    assert W.constant == 1
    assert W.homogeneous_part(2) == Phi
    assert W.parity() is Parity.EVEN
    idx = [reg.index(t) for t in faces(U, 3)]
    for D in gaussian_space(reg, idx, form_matrix(Phi, idx)):
        assert apply(D, W).is_zero()


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_family2_weight_identity(seed):
    rng = np.random.default_rng(seed)
    phi = FaceFactorTable(general_coords(rng, 2), 2)
    reg = move_registry()
    Phi = quadratic_form(U, phi, 1, reg)
    assert weight_family2(U, phi, 1, reg) == Phi
    h = Fraction(int(rng.integers(1, 100)), int(rng.integers(1, 100)))
    assert exponential(Phi / h).scale(h) == weight_family2(U, phi, 1, reg, h)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_edge_equations(seed):
    rng = np.random.default_rng(seed)
    coords = general_coords(rng, 2)
    phi = FaceFactorTable(coords, 2)
    move = builtin_move("2-4")
    reg = move_registry(move)
    h = allowable_h(move, {(1, 2): Fraction(3), (3, 5): Fraction(-2, 7)}, phi)
    for side in (move.lhs, move.rhs):
        W = assign_weights(side, phi, reg, h)
        for u in side.pentachora:
            for a in faces(u, 1):
                assert apply(edge_operator(a, side, phi, reg), W[u]).is_zero()
    W = assign_weights(move.rhs, phi, reg)
    D = edge_operator((5, 6), move.rhs, phi, reg)
    assert apply(D, W[(1, 2, 3, 5, 6)]).is_zero()


def test_edge_56_operator_and_weight():
    coords = general_coords(np.random.default_rng(3), 2)
    phi = FaceFactorTable(coords, 2)
    move = builtin_move("2-4")
    reg = move_registry(move)
    D = edge_operator((5, 6), move.rhs, phi, reg)
    expected = {}
    for k, l in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)):
        expected[reg.index((k, l, 5, 6))] = 1 / (phi(5, 6, k) * phi(5, 6, l))
    assert D.beta == expected and not D.gamma
    w = edge_weight((5, 6), move.rhs, phi, reg)
    assert w == reg.generator((1, 2, 5, 6), phi(1, 5, 6) * phi(2, 5, 6))
    assert apply(D, w) == reg.one()


def test_allowable_h_incidence():
    coords = general_coords(np.random.default_rng(4), 2)
    phi = FaceFactorTable(coords, 2)
    move = builtin_move("3-3")
    assert all(v == 0 for v in allowable_h(move, {}, phi).values())
    h = allowable_h(move, {(1, 2): Fraction(1)}, phi)
    assert {u for u, v in h.items() if v != 0} == {u for u in move.glued.pentachora if {1, 2} <= set(u)}


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_allowable_h_is_killed_by_g4(seed):
    rng = np.random.default_rng(seed)
    coords = general_coords(rng, 2)
    S = boundary_delta5(coords)
    chain = {e: Fraction(int(rng.integers(-9, 10))) for e in S.simplices(1)}
    h = allowable_h(builtin_move("2-4"), chain, FaceFactorTable(coords, 2))
    maps = build_chain_maps(S)
    assert all(v == 0 for v in maps.apply_g4(h).values())


def test_h_linear():
    coords = {v: (Fraction(v), Fraction(2 * v), Fraction(-v)) for v in range(1, 7)}
    assert h_linear(U, coords, 1, 2, 3) == 6 + 24 - 18


def test_tetra_registry():
    reg = tetra_registry(boundary_delta5())
    assert len(reg) == 15 and reg.label(0) == (1, 2, 3, 4)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_explicit_vectors(seed):
    rng = np.random.default_rng(seed)
    coords = general_coords(rng, 1)
    phi = FaceFactorTable(coords, 1)
    move = builtin_move("3-3")
    reg = move_registry(move)
    vecs = []
    for side in (move.lhs, move.rhs):
        W = assign_weights(side, phi, reg)
        for u in side.pentachora:
            v = explicit_isotropic_vectors(u, coords, reg, move)
            assert len(v.beta) == 3 == len(v.gamma)
            assert apply(v, W[u]).is_zero()
            # the opposite sign pattern does not annihilate
            wrong = FirstOrderOperator(reg, v.beta, {t: -g for t, g in v.gamma.items()})
            assert not apply(wrong, W[u]).is_zero()
            vecs.append(v)
    assert all(pairing(a, b) == 0 for a in vecs for b in vecs)


def test_explicit_vectors_reject_foreign_simplex():
    coords = general_coords(np.random.default_rng(0), 1)
    move = builtin_move("3-3")
    with pytest.raises(ValueError):
        explicit_isotropic_vectors((1, 2, 3, 4, 7), coords, move_registry(move), move)
