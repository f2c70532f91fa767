from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grassmann_pachner.complexes import (Triangulation, apply_bistellar, boundary_delta5, builtin_move,
                                         bundled_path, classify, epsilon_sign, faces, format_triangulation,
                                         normalize_kind, orient, parse_triangulation, perm_sign,
                                         random_walk, read_triangulation, resolve_input, sphere_product_s2s2,
                                         staircase_product, valid_locations, write_triangulation)
from grassmann_pachner.errors import MoveError, TriangulationError

seeds = st.integers(0, 2 ** 32 - 1)


def test_perm_and_epsilon_sign():
    assert perm_sign((1, 2, 3)) == 1 and perm_sign((2, 1, 3)) == -1
    assert epsilon_sign((1, 2, 3, 4, 5), (1, 2, 3, 4, 5)) == 1
    assert epsilon_sign((1, 2, 3, 4, 5), (4, 1, 2, 3, 5)) == -1
    move = builtin_move("3-3")
    assert move.lhs.epsilon((1, 2, 3, 4, 6)) == -1


def test_faces():
    assert faces((1, 2, 3, 4, 5), 3) == [(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 4, 5), (1, 3, 4, 5), (2, 3, 4, 5)]
    assert len(faces((1, 2, 3, 4, 5), 2)) == 10


def test_normalize_kind():
    assert normalize_kind("33") == "3-3" and normalize_kind("2-4") == "2-4"
    with pytest.raises(ValueError):
        normalize_kind("7-7")


def test_builtin_moves():
    m33 = builtin_move("3-3")
    assert m33.lhs.pentachora == [(1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 5, 6)]
    assert m33.rhs.pentachora == [(1, 2, 4, 5, 6), (1, 3, 4, 5, 6), (2, 3, 4, 5, 6)]
    m24 = builtin_move("2-4")
    assert m24.lhs.pentachora == [(1, 2, 3, 4, 5), (1, 2, 3, 4, 6)]
    assert len(m24.rhs) == 4
    S = boundary_delta5()
    for m in (m33, m24):
        assert m.glued.signs == S.signs
        assert m.glued.is_closed() and m.glued.is_consistently_oriented()
        assert len(m.boundary) == 9 if m is m33 else len(m.boundary) == 8


def test_classify_move_sides():
    c = classify(builtin_move("3-3").lhs)
    assert c.inner_tetrahedra == {(1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 3, 6)}
    assert len(c.boundary_tetrahedra) == 9 and not c.inner_edges
    c = classify(builtin_move("2-4").rhs)
    assert c.inner_tetrahedra == {(1, 2, 5, 6), (1, 3, 5, 6), (1, 4, 5, 6),
                                  (2, 3, 5, 6), (2, 4, 5, 6), (3, 4, 5, 6)}
    assert c.inner_edges == {(5, 6)}
    c = classify(boundary_delta5())
    assert not c.boundary_tetrahedra and len(c.inner_edges) == 15


def test_sphere_invariants():
    S = boundary_delta5()
    assert S.f_vector() == (6, 15, 20, 15, 6)
    assert S.euler_characteristic() == 2
    assert S.is_closed() and S.is_consistently_oriented()
    assert S.flipped().is_consistently_oriented()


def test_triangulation_validation():
    with pytest.raises(TriangulationError):
        Triangulation(5, {(2, 1, 3, 4, 5): 1})
    with pytest.raises(TriangulationError):
        Triangulation(5, {(1, 2, 3, 4, 5): 2})
    with pytest.raises(TriangulationError):
        Triangulation(4, {(1, 2, 3, 4, 5): 1})
    with pytest.raises(TriangulationError):
        Triangulation(8, {(1, 2, 3, 4, 5): 1, (1, 2, 3, 4, 6): -1, (1, 2, 3, 4, 7): 1})


def test_one_five_move():
    S = boundary_delta5()
    T = apply_bistellar(S, "1-5", (1, 2, 3, 4, 5))
    assert T.n_vertices == 7 and len(T) == len(S) + 4
    assert T.is_closed() and T.is_consistently_oriented() and T.euler_characteristic() == 2
    back = apply_bistellar(T, "5-1", (7,))
    assert back.canonical() == S.canonical()


def test_two_four_is_illegal_on_the_five_simplex_boundary():
    # the link edge already exists, so the move would create a duplicate
    with pytest.raises(MoveError):
        apply_bistellar(boundary_delta5(), "2-4", (1, 2, 3, 4))
    assert valid_locations(boundary_delta5(), "2-4") == []


def test_two_four_after_subdivision():
    T = apply_bistellar(boundary_delta5(), "1-5", (1, 2, 3, 4, 5))
    locs = valid_locations(T, "2-4")
    assert locs
    U = apply_bistellar(T, "2-4", locs[0])
    assert len(U) == len(T) + 2
    assert U.is_closed() and U.is_consistently_oriented() and U.euler_characteristic() == 2
    (edge,) = [e for e in U.simplices(1) if e not in T.simplices(1)]
    V = apply_bistellar(U, "4-2", edge)
    assert V.canonical() == T.canonical()


def test_move_location_errors():
    S = boundary_delta5()
    with pytest.raises(MoveError):
        apply_bistellar(S, "1-5", (1, 2, 3, 4, 9))
    with pytest.raises(MoveError):
        apply_bistellar(S, "3-3", (1, 2))


def test_three_three_involution(rng):
    T, _ = random_walk(boundary_delta5(), 4, rng, kinds=("1-5", "2-4"))
    locs = valid_locations(T, "3-3")
    assert locs
    for sigma in locs[:5]:
        U = apply_bistellar(T, "3-3", sigma)
        assert len(U) == len(T) and U.is_consistently_oriented()
        (tau,) = [t for t in U.simplices(2) if t not in T.simplices(2)]
        assert apply_bistellar(U, "3-3", tau).canonical() == T.canonical()


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_random_walk_invariants(seed):
    rng = np.random.default_rng(seed)
    T, log = random_walk(boundary_delta5(), 10, rng)
    assert len(log) == 10
    assert T.is_closed() and T.is_consistently_oriented() and T.euler_characteristic() == 2
    f = T.f_vector()
    assert 2 * f[3] == 5 * f[4]


def test_random_walk_reproducible():
    a = random_walk(boundary_delta5(), 8, np.random.default_rng(11))
    b = random_walk(boundary_delta5(), 8, np.random.default_rng(11))
    assert a[1] == b[1] and a[0].canonical() == b[0].canonical()


def test_new_vertex_gets_coordinates(rng):
    coords = {v: (Fraction(v), Fraction(v * v), Fraction(1)) for v in range(1, 7)}
    T = apply_bistellar(boundary_delta5(coords), "1-5", (2, 3, 4, 5, 6), rng)
    assert set(T.coords) == set(range(1, 8)) and len(T.coords[7]) == 3


def test_file_round_trip(tmp_path, rng):
    T, _ = random_walk(boundary_delta5(), 10, rng)
    T = T.with_coords({v: (Fraction(v, 3),) for v in T.vertices})
    path = tmp_path / "walk.tri"
    write_triangulation(T, path, "walked sphere")
    assert read_triangulation(path).canonical() == T.canonical()


def test_bundled_fixtures():
    S = read_triangulation(bundled_path("boundary_delta5.tri"))
    assert S.canonical() == boundary_delta5().canonical()
    assert resolve_input("boundary_delta5.tri").exists()
    P = read_triangulation(resolve_input("s2xs2.tri"))
    assert P.canonical() == sphere_product_s2s2().canonical()
    with pytest.raises(FileNotFoundError):
        resolve_input("no_such_file.tri")


BASE = "dim 4\nvertices 6\n"


@pytest.mark.parametrize("text", [
    "vertices 6\nsimplex 1 2 3 4 5 +1\n",
    "dim 3\nvertices 6\n",
    BASE + "simplex 2 1 3 4 5 +1\n",
    BASE + "simplex 1 2 3 4 5 +2\n",
    BASE + "simplex 1 2 3 4 5 +1\nsimplex 1 2 3 4 5 +1\n",
    BASE + "coord 1 0.5\n",
    BASE + "frobnicate\n",
    "dim 4\nvertices 7\nsimplex 1 2 3 4 5 +1\nsimplex 1 2 3 4 6 -1\nsimplex 1 2 3 4 7 +1\n",
    BASE + "simplex 1 2 3 4 5 +1\nsimplex 1 2 3 4 6 +1\n",
])
def test_parse_errors(text):
    with pytest.raises(TriangulationError):
        parse_triangulation(text)


def test_parse_lenient_orientation():
    text = BASE + "simplex 1 2 3 4 5 +1\nsimplex 1 2 3 4 6 +1\n"
    assert len(parse_triangulation(text, strict_orientation=False)) == 2


def test_format_is_parseable():
    S = boundary_delta5()
    assert parse_triangulation(format_triangulation(S, "a\nb")).canonical() == S.canonical()


def test_orient_recovers_sphere():
    S = orient(boundary_delta5().pentachora)
    assert S.is_consistently_oriented()
    assert S.signs in (boundary_delta5().signs, boundary_delta5().flipped().signs)


def test_orient_rejects_non_orientable():
    # a facet shared by three pentachora cannot be oriented
    with pytest.raises(TriangulationError):
        orient([(1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 4, 7)])


def test_staircase_product_of_spheres():
    P = sphere_product_s2s2()
    assert P.f_vector() == (16, 84, 216, 240, 96)
    assert P.euler_characteristic() == 4
    assert P.is_closed() and P.is_consistently_oriented()
    with pytest.raises(TriangulationError):
        staircase_product([(1, 2)], [(1, 2, 3)])


def test_relabel_keeps_orientation():
    S = boundary_delta5()
    perm = dict(zip(range(1, 7), (3, 1, 2, 6, 5, 4)))
    R = S.relabel(perm)
    assert R.is_consistently_oriented()
    # an odd relabelling of all six vertices reverses the sphere's orientation
    assert perm_sign(list(perm.values())) == -1
    assert R.signs == S.flipped().signs
