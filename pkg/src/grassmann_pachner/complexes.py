"""Oriented triangulated 4-manifolds, Pachner moves and the ``.tri`` text format.

A pentachoron is stored as its ascending vertex tuple together with a sign
``p = +1/-1``: ``+1`` means the ascending order gives the manifold's
orientation on that simplex.  Permuting the vertices multiplies the sign by the
permutation parity.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MoveError, TriangulationError
from .scalars import random_rational

Simplex = tuple[int, ...]

MOVE_SIZES = {"1-5": 5, "2-4": 4, "3-3": 3, "4-2": 2, "5-1": 1}
_KIND_ALIASES = {
    "15": "1-5", "24": "2-4", "33": "3-3", "42": "4-2", "51": "5-1",
}


def normalize_kind(kind) -> str:
    k = str(kind).replace("→", "-").replace("->", "-").replace("_", "-").replace(" ", "")
    k = _KIND_ALIASES.get(k, k)
    if k.lower() in ("threethree",):
        return "3-3"
    if k.lower() in ("twofour",):
        return "2-4"
    if k not in MOVE_SIZES:
        raise ValueError(f"unknown move kind {kind!r}")
    return k


def perm_sign(seq: Sequence) -> int:
    """Parity of the permutation taking ``sorted(seq)`` to ``seq``."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        raise ValueError("sequence has repeated entries")
    inv = 0
    for a, b in itertools.combinations(seq, 2):
        if a > b:
            inv += 1
    return -1 if inv & 1 else 1


def epsilon_sign(u: Sequence[int], ordering: Sequence[int], orientation: int = 1) -> int:
    """``orientation`` times the parity of ``ordering`` against ascending ``u``."""
    if sorted(ordering) != sorted(u):
        raise ValueError(f"{tuple(ordering)} is not a permutation of {tuple(u)}")
    return orientation * perm_sign(ordering)


def faces(simplex: Simplex, k: int) -> list[Simplex]:
    """All ``k``-dimensional faces (``k+1`` vertices), ascending."""
    return list(itertools.combinations(simplex, k + 1))


def facet_sign(u: Simplex, sign: int, facet: Simplex) -> int:
    """Orientation induced on ``facet`` (read ascending) by the oriented simplex ``u``."""
    missing = [v for v in u if v not in facet]
    if len(missing) != 1:
        raise ValueError(f"{facet} is not a facet of {u}")
    pos = u.index(missing[0])
    return sign * (-1 if pos & 1 else 1)


@dataclass(frozen=True)
class Triangulation:
    """Immutable oriented pentachoron complex with optional vertex coordinates."""

    n_vertices: int
    signs: Mapping[Simplex, int]
    coords: Mapping[int, tuple] | None = None

    def __post_init__(self):
        signs = {}
        for u, s in dict(self.signs).items():
            u = tuple(u)
            if len(u) != 5 or len(set(u)) != 5:
                raise TriangulationError(f"{u} is not a 4-simplex")
            if list(u) != sorted(u):
                raise TriangulationError(f"simplex {u} is not written in ascending order")
            if s not in (1, -1):
                raise TriangulationError(f"orientation sign of {u} must be +1 or -1")
            if u[0] < 1 or u[-1] > self.n_vertices:
                raise TriangulationError(f"simplex {u} uses a label outside 1..{self.n_vertices}")
            signs[u] = s
        object.__setattr__(self, "signs", dict(sorted(signs.items())))
        if self.coords is not None:
            object.__setattr__(self, "coords",
                               {int(k): tuple(v) for k, v in sorted(dict(self.coords).items())})
        for t, us in self.facet_map().items():
            if len(us) > 2:
                raise TriangulationError(f"tetrahedron {t} lies in {len(us)} pentachora")

    @classmethod
    def from_list(cls, pentachora: Iterable[tuple[Sequence[int], int]], n_vertices: int | None = None,
                  coords=None) -> "Triangulation":
        items = [(tuple(u), s) for u, s in pentachora]
        if n_vertices is None:
            n_vertices = max(max(u) for u, _ in items)
        return cls(n_vertices, dict(items), coords)

    # -- structure ----------------------------------------------------------
    @property
    def pentachora(self) -> list[Simplex]:
        return list(self.signs)

    def __len__(self):
        return len(self.signs)

    def __contains__(self, u) -> bool:
        return tuple(u) in self.signs

    def sign(self, u: Sequence[int]) -> int:
        return self.signs[tuple(sorted(u))]

    def epsilon(self, ordering: Sequence[int]) -> int:
        """Orientation sign of the pentachoron read in the order ``ordering``."""
        u = tuple(sorted(ordering))
        return epsilon_sign(u, ordering, self.signs[u])

    @property
    def vertices(self) -> list[int]:
        return sorted({v for u in self.signs for v in u})

    def simplices(self, k: int) -> list[Simplex]:
        out = set()
        for u in self.signs:
            out.update(faces(u, k))
        return sorted(out)

    def facet_map(self) -> dict[Simplex, list[Simplex]]:
        out: dict[Simplex, list[Simplex]] = {}
        for u in self.signs:
            for t in faces(u, 3):
                out.setdefault(t, []).append(u)
        return out

    def star(self, face: Iterable[int]) -> list[Simplex]:
        s = set(face)
        return [u for u in self.signs if s <= set(u)]

    def has_face(self, face: Iterable[int]) -> bool:
        s = set(face)
        return any(s <= set(u) for u in self.signs)

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.simplices(k)) for k in range(5))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def is_closed(self) -> bool:
        return all(len(us) == 2 for us in self.facet_map().values())

    def orientation_defects(self) -> list[Simplex]:
        """Shared tetrahedra whose two induced orientations agree (should be none)."""
        bad = []
        for t, us in self.facet_map().items():
            if len(us) == 2:
                a, b = (facet_sign(u, self.signs[u], t) for u in us)
                if a == b:
                    bad.append(t)
        return bad

    def is_consistently_oriented(self) -> bool:
        return not self.orientation_defects()

    # -- derived complexes -----------------------------------------------
    def flipped(self) -> "Triangulation":
        return Triangulation(self.n_vertices, {u: -s for u, s in self.signs.items()}, self.coords)

    def with_coords(self, coords: Mapping[int, tuple] | None) -> "Triangulation":
        return Triangulation(self.n_vertices, self.signs, coords)

    def relabel(self, mapping: Mapping[int, int], n_vertices: int | None = None) -> "Triangulation":
        """Rename vertices; orientation signs are corrected for the reordering."""
        signs = {}
        for u, s in self.signs.items():
            image = [mapping.get(v, v) for v in u]
            signs[tuple(sorted(image))] = s * perm_sign(image)
        coords = None
        if self.coords is not None:
            coords = {mapping.get(v, v): c for v, c in self.coords.items()}
        n = n_vertices if n_vertices is not None else max(max(u) for u in signs)
        return Triangulation(n, signs, coords)

    def union(self, other: "Triangulation") -> "Triangulation":
        signs = dict(self.signs)
        for u, s in other.signs.items():
            if u in signs:
                raise TriangulationError(f"pentachoron {u} present in both complexes")
            signs[u] = s
        coords = dict(self.coords or {})
        coords.update(other.coords or {})
        return Triangulation(max(self.n_vertices, other.n_vertices), signs, coords or None)

    def canonical(self) -> tuple:
        return (self.n_vertices, tuple(self.signs.items()),
                tuple(sorted((self.coords or {}).items())))


@dataclass(frozen=True)
class FaceClassification:
    boundary_tetrahedra: frozenset
    inner_tetrahedra: frozenset
    inner_edges: frozenset
    triangles: frozenset
    edges: frozenset


def classify(T: Triangulation) -> FaceClassification:
    fm = T.facet_map()
    boundary = frozenset(t for t, us in fm.items() if len(us) == 1)
    inner = frozenset(t for t, us in fm.items() if len(us) == 2)
    edges = frozenset(T.simplices(1))
    on_boundary = set()
    for t in boundary:
        on_boundary.update(faces(t, 1))
    return FaceClassification(boundary, inner, edges - on_boundary, frozenset(T.simplices(2)), edges)


def orient(pentachora: Iterable[Sequence[int]], n_vertices: int | None = None, coords=None) -> Triangulation:
    """Consistent orientation signs for an unoriented pentachoron list.

    Signs are propagated across shared tetrahedra from the first simplex of
    each connected component; raises TriangulationError if the complex is
    not orientable.
    """
    simplices = sorted({tuple(sorted(u)) for u in pentachora})
    if n_vertices is None:
        n_vertices = max(max(u) for u in simplices)
    fm: dict[Simplex, list[Simplex]] = {}
    for u in simplices:
        for t in faces(u, 3):
            fm.setdefault(t, []).append(u)
    signs: dict[Simplex, int] = {}
    for start in simplices:
        if start in signs:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            u = stack.pop()
            for t in faces(u, 3):
                for w in fm[t]:
                    if w == u:
                        continue
                    want = -facet_sign(u, signs[u], t) * facet_sign(w, 1, t)
                    if w not in signs:
                        signs[w] = want
                        stack.append(w)
                    elif signs[w] != want:
                        raise TriangulationError("complex is not orientable")
    return Triangulation(n_vertices, signs, coords)


# -- built-in moves -------------------------------------------------------------

def boundary_delta5(coords=None) -> Triangulation:
    """The 4-sphere as the boundary of the 5-simplex 123456, standard orientation."""
    signs = {}
    for v in range(1, 7):
        u = tuple(w for w in range(1, 7) if w != v)
        signs[u] = 1 if (v - 1) % 2 == 0 else -1
    return Triangulation(6, signs, coords)


def staircase_product(A: Iterable[Sequence[int]], B: Iterable[Sequence[int]]) -> Triangulation:
    """Oriented triangulation of ``|A| x |B|`` for two pure 2-dimensional complexes.

    Each product of triangles is cut into the six monotone lattice-path
    simplices; vertex ``(a, b)`` becomes ``(a - 1) * nb + b`` with ``nb`` the
    largest vertex label of ``B``.
    """
    A = [tuple(sorted(t)) for t in A]
    B = [tuple(sorted(t)) for t in B]
    if any(len(t) != 3 for t in A + B):
        raise TriangulationError("staircase_product needs two pure 2-dimensional complexes")
    nb = max(v for t in B for v in t)
    paths = sorted(set(itertools.permutations((0, 0, 1, 1))))
    out = set()
    for a in A:
        for b in B:
            for path in paths:
                i = j = 0
                verts = [(a[0], b[0])]
                for step in path:
                    i, j = (i + 1, j) if step == 0 else (i, j + 1)
                    verts.append((a[i], b[j]))
                out.add(tuple(sorted((x - 1) * nb + y for x, y in verts)))
    return orient(sorted(out))


def sphere_product_s2s2() -> Triangulation:
    """``S^2 x S^2`` as the staircase product of two tetrahedron boundaries (96 pentachora)."""
    S2 = list(itertools.combinations((1, 2, 3, 4), 3))
    return staircase_product(S2, S2)


@dataclass(frozen=True)
class MoveInstance:
    kind: str
    lhs: Triangulation
    rhs: Triangulation
    glued: Triangulation
    boundary: frozenset

    def with_coords(self, coords) -> "MoveInstance":
        return MoveInstance(self.kind, self.lhs.with_coords(coords), self.rhs.with_coords(coords),
                            self.glued.with_coords(coords), self.boundary)


def _make_move(kind: str, lhs: dict, rhs: dict) -> MoveInstance:
    L = Triangulation(6, lhs)
    R = Triangulation(6, rhs)
    bl, br = classify(L).boundary_tetrahedra, classify(R).boundary_tetrahedra
    if bl != br:
        raise TriangulationError("move sides have different boundaries")
    # Gluing reverses the orientation of one side.
    glued = L.flipped().union(R)
    return MoveInstance(kind, L, R, glued, bl)


def builtin_move(kind) -> MoveInstance:
    kind = normalize_kind(kind)
    if kind == "3-3":
        return _make_move(kind,
                          {(1, 2, 3, 4, 5): 1, (1, 2, 3, 4, 6): -1, (1, 2, 3, 5, 6): 1},
                          {(1, 2, 4, 5, 6): 1, (1, 3, 4, 5, 6): -1, (2, 3, 4, 5, 6): 1})
    if kind == "2-4":
        return _make_move(kind,
                          {(1, 2, 3, 4, 5): 1, (1, 2, 3, 4, 6): -1},
                          {(1, 2, 3, 5, 6): -1, (1, 2, 4, 5, 6): 1,
                           (1, 3, 4, 5, 6): -1, (2, 3, 4, 5, 6): 1})
    raise ValueError(f"no built-in instance for move {kind}")


# -- bistellar engine -----------------------------------------------------

def _move_pattern(T: Triangulation, kind: str, location: Sequence[int]):
    """Return ``(sigma, tau, star)`` for a legal move, else raise MoveError."""
    sigma = tuple(sorted(location))
    size = MOVE_SIZES[kind]
    if len(sigma) != size or len(set(sigma)) != size:
        raise MoveError(f"move {kind} needs a location with {size} vertices, got {sigma}")
    star = T.star(sigma)
    if kind == "1-5":
        if sigma not in T.signs:
            raise MoveError(f"{sigma} is not a pentachoron of the complex")
        return sigma, (T.n_vertices + 1,), star
    link = sorted(set().union(*map(set, star)) - set(sigma)) if star else []
    tau = tuple(link)
    if len(star) != 6 - size or len(tau) != 6 - size:
        raise MoveError(f"star of {sigma} is not the join with the boundary of a {5 - size}-simplex")
    expected = {tuple(sorted(set(sigma) | (set(tau) - {w}))) for w in tau}
    if expected != set(star):
        raise MoveError(f"link of {sigma} is not the boundary of {tau}")
    if T.has_face(tau):
        raise MoveError(f"{tau} is already a simplex of the complex")
    return sigma, tau, star


def apply_bistellar(T: Triangulation, kind, location: Sequence[int], rng=None) -> Triangulation:
    """Replace ``sigma * boundary(tau)`` by ``boundary(sigma) * tau``.

    ``location`` is the simplex ``sigma``: a pentachoron (1-5), tetrahedron
    (2-4), triangle (3-3), edge (4-2) or vertex (5-1).  For 1-5 the new vertex
    gets label ``n_vertices + 1`` and, when coordinates are present, fresh
    random rational coordinates drawn from ``rng``.
    """
    kind = normalize_kind(kind)
    sigma, tau, star = _move_pattern(T, kind, location)
    signs = {u: s for u, s in T.signs.items() if u not in set(star)}
    for v in sigma:
        q = tuple(sorted((set(sigma) - {v}) | set(tau)))
        w = next(iter(tau))
        facet = tuple(sorted(set(q) - {w}))
        old = tuple(sorted(set(sigma) | (set(tau) - {w})))
        induced = facet_sign(old, T.signs[old], facet)
        signs[q] = induced * (-1 if q.index(w) & 1 else 1)
    n = T.n_vertices
    coords = dict(T.coords) if T.coords is not None else None
    if kind == "1-5":
        n += 1
        if coords is not None:
            rng = np.random.default_rng(0) if rng is None else rng
            dim = len(next(iter(coords.values())))
            coords[n] = tuple(random_rational(rng) for _ in range(dim))
    out = Triangulation(n, signs, coords)
    if kind == "5-1":
        gone = sigma[0]
        if coords is not None:
            coords.pop(gone, None)
            out = out.with_coords(coords)
        mapping = {v: v - 1 for v in range(gone + 1, n + 1)}
        out = out.relabel(mapping, n - 1)
    return out


def valid_locations(T: Triangulation, kind) -> list[Simplex]:
    kind = normalize_kind(kind)
    size = MOVE_SIZES[kind]
    out = []
    for sigma in T.simplices(size - 1):
        try:
            _move_pattern(T, kind, sigma)
        except MoveError:
            continue
        out.append(sigma)
    return out


def random_walk(T: Triangulation, steps: int, rng, kinds: Sequence[str] = ("3-3", "2-4", "4-2", "1-5")):
    """Apply ``steps`` random legal moves; returns the final complex and the move log."""
    log = []
    for _ in range(steps):
        options = [(k, valid_locations(T, k)) for k in kinds]
        options = [(k, locs) for k, locs in options if locs]
        if not options:
            raise MoveError("no legal move among the requested kinds")
        k, locs = options[int(rng.integers(len(options)))]
        loc = locs[int(rng.integers(len(locs)))]
        T = apply_bistellar(T, k, loc, rng)
        log.append((normalize_kind(k), loc))
    return T, log


# -- file format ---------------------------------------------------------

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_rational(tok: str, lineno: int) -> Fraction:
    if not _RATIONAL.match(tok):
        raise TriangulationError(f"line {lineno}: {tok!r} is not an exact rational p/q")
    q = Fraction(tok)
    return q


def parse_triangulation(text: str, strict_orientation: bool = True) -> Triangulation:
    dim = None
    n_vertices = None
    signs: dict[Simplex, int] = {}
    coords: dict[int, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key = tok[0]
        try:
            if key == "dim":
                dim = int(tok[1])
                if dim != 4 or len(tok) != 2:
                    raise TriangulationError(f"line {lineno}: only 'dim 4' is supported")
            elif key == "vertices":
                if len(tok) != 2:
                    raise TriangulationError(f"line {lineno}: expected 'vertices N'")
                n_vertices = int(tok[1])
            elif key == "coord":
                if len(tok) not in (3, 5):
                    raise TriangulationError(f"line {lineno}: coord takes 1 or 3 values")
                coords[int(tok[1])] = tuple(_parse_rational(t, lineno) for t in tok[2:])
            elif key == "simplex":
                if len(tok) != 7:
                    raise TriangulationError(f"line {lineno}: expected 5 labels and a sign")
                u = tuple(int(t) for t in tok[1:6])
                if list(u) != sorted(u) or len(set(u)) != 5:
                    raise TriangulationError(f"line {lineno}: labels must be strictly ascending")
                if tok[6] not in ("+1", "-1", "1"):
                    raise TriangulationError(f"line {lineno}: sign must be +1 or -1")
                if u in signs:
                    raise TriangulationError(f"line {lineno}: duplicate simplex {u}")
                signs[u] = int(tok[6])
            else:
                raise TriangulationError(f"line {lineno}: unknown keyword {key!r}")
        except ValueError as exc:
            if isinstance(exc, TriangulationError):
                raise
            raise TriangulationError(f"line {lineno}: {exc}") from None
    if dim is None:
        raise TriangulationError("missing 'dim 4' line")
    if n_vertices is None:
        raise TriangulationError("missing 'vertices N' line")
    if coords and len({len(c) for c in coords.values()}) != 1:
        raise TriangulationError("all coord lines must have the same number of values")
    T = Triangulation(n_vertices, signs, coords or None)
    if strict_orientation and T.orientation_defects():
        raise TriangulationError(f"inconsistent orientation on tetrahedra {T.orientation_defects()[:3]}")
    return T


def format_triangulation(T: Triangulation, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append("dim 4")
    lines.append(f"vertices {T.n_vertices}")
    for v, c in (T.coords or {}).items():
        lines.append("coord " + str(v) + " " + " ".join(str(Fraction(x)) for x in c))
    for u, s in T.signs.items():
        lines.append("simplex " + " ".join(map(str, u)) + (" +1" if s > 0 else " -1"))
    return "\n".join(lines) + "\n"


def read_triangulation(path, strict_orientation: bool = True) -> Triangulation:
    return parse_triangulation(Path(path).read_text(encoding="utf-8"), strict_orientation)


def write_triangulation(T: Triangulation, path, comment: str | None = None) -> None:
    Path(path).write_text(format_triangulation(T, comment), encoding="utf-8")


def bundled_path(name: str = "boundary_delta5.tri") -> Path:
    return Path(__file__).with_name("data") / name


def resolve_input(path) -> Path:
    """A user path, falling back to a bundled fixture of the same name."""
    p = Path(path)
    if p.exists():
        return p
    b = bundled_path(p.name)
    if b.exists():
        return b
    raise FileNotFoundError(path)
