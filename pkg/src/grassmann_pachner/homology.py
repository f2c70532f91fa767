"""Exotic chain maps g3, g4 from family-2 face factors, and classical b2.

``g3`` sends an edge chain to one scalar per pentachoron, ``g4`` sends a
pentachoron chain back to edges.  Their composite vanishes; the exotic
middle homology is ``dim ker g4 - rank g3``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import Simplex, Triangulation, classify, faces
from .errors import DegenerateError, TriangulationError
from .linalg import matmul, rank
from .scalars import random_rational
from .weights import FaceFactorTable, g3_entry, g4_entry


@dataclass
class ChainMaps:
    """``G3`` (pentachora x inner edges) and ``G4`` (inner edges x pentachora)."""

    pentachora: list[Simplex]
    edges: list[Simplex]
    G3: list[list]
    G4: list[list]

    def composite(self) -> list[list]:
        """``G4 G3``, an edges x edges matrix."""
        if not self.edges:
            return []
        return matmul(self.G4, self.G3)

    def is_chain(self) -> bool:
        return all(v == 0 for row in self.composite() for v in row)

    def apply_g3(self, chain: Mapping[Simplex, object]) -> dict[Simplex, object]:
        vec = [chain.get(b, 0) for b in self.edges]
        return {u: sum((a * c for a, c in zip(row, vec)), Fraction(0)) for u, row in zip(self.pentachora, self.G3)}

    def apply_g4(self, values: Mapping[Simplex, object]) -> dict[Simplex, object]:
        vec = [values.get(u, 0) for u in self.pentachora]
        return {b: sum((a * c for a, c in zip(row, vec)), Fraction(0)) for b, row in zip(self.edges, self.G4)}


def random_coords(vertices: Sequence[int], rng, family: int = 2) -> dict[int, tuple]:
    n = 1 if family == 1 else 3
    return {v: tuple(random_rational(rng) for _ in range(n)) for v in vertices}


def build_chain_maps(T: Triangulation, coords: Mapping[int, Sequence] | None = None) -> ChainMaps:
    """Exact ``G3``/``G4`` over the inner edges of ``T`` from family-2 coordinates."""
    coords = coords if coords is not None else T.coords
    if coords is None:
        raise ValueError("vertex coordinates are required")
    phi = FaceFactorTable({v: tuple(coords[v]) for v in T.vertices}, 2)
    pents = T.pentachora
    edges = sorted(classify(T).inner_edges)
    col = {b: k for k, b in enumerate(edges)}
    G3 = [[Fraction(0)] * len(edges) for _ in pents]
    G4 = [[Fraction(0)] * len(pents) for _ in edges]
    for r, u in enumerate(pents):
        for b in faces(u, 1):
            k = col.get(b)
            if k is None:
                continue
            G3[r][k] = g3_entry(b, u, phi)
            G4[k][r] = g4_entry(b, u, phi, T)
    return ChainMaps(pents, edges, G3, G4)


@dataclass
class HomologyReport:
    rank_g3: int
    rank_g4: int
    exotic_dim: int
    n_pentachora: int
    n_inner_edges: int
    chain_ok: bool
    classical_b2: int | None = None
    trial_dims: list[int] = dc_field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"rank_g3={self.rank_g3}", f"rank_g4={self.rank_g4}", f"exotic_dim={self.exotic_dim}"]
        if self.classical_b2 is not None:
            out.append(f"classical_b2={self.classical_b2}")
        return out

    def as_dict(self) -> dict:
        return {"rank_g3": self.rank_g3, "rank_g4": self.rank_g4, "exotic_dim": self.exotic_dim,
                "classical_b2": self.classical_b2, "n_pentachora": self.n_pentachora,
                "n_inner_edges": self.n_inner_edges, "chain_ok": self.chain_ok,
                "trial_dims": list(self.trial_dims)}


def _report(maps: ChainMaps) -> HomologyReport:
    r3 = rank(maps.G3) if maps.edges else 0
    r4 = rank(maps.G4) if maps.edges else 0
    n4 = len(maps.pentachora)
    return HomologyReport(r3, r4, (n4 - r4) - r3, n4, len(maps.edges), maps.is_chain())


def exotic_betti(T: Triangulation, coords: Mapping[int, Sequence] | None = None, trials: int = 1,
                 rng=None, with_classical: bool = True) -> HomologyReport:
    """Exact ranks of ``g3``/``g4``; the reported trial is the one with the smallest exotic dimension.

    Given ``coords`` are used for the first trial; other trials draw fresh
    random family-2 coordinates from ``rng``.  Degenerate draws are skipped.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    import numpy as np
    rng = rng if rng is not None else np.random.default_rng(0)
    base = coords if coords is not None else (T.coords if T.coords and all(len(c) == 3 for c in T.coords.values()) else None)
    best, dims, last_err = None, [], None
    for k in range(trials):
        c = base if (k == 0 and base is not None) else random_coords(T.vertices, rng)
        try:
            rep = _report(build_chain_maps(T, c))
        except DegenerateError as exc:
            last_err = exc
            continue
        dims.append(rep.exotic_dim)
        if best is None or rep.exotic_dim < best.exotic_dim:
            best = rep
    if best is None:
        raise DegenerateError(f"all {trials} coordinate draws were degenerate: {last_err}")
    best.trial_dims = dims
    if with_classical and T.is_closed():
        best.classical_b2 = classical_b2(T)
    return best


def boundary_matrix(T: Triangulation, k: int) -> list[list[int]]:
    """Simplicial boundary from k-simplices (columns) to (k-1)-simplices (rows)."""
    rows = T.simplices(k - 1)
    cols = T.simplices(k)
    idx = {s: i for i, s in enumerate(rows)}
    M = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for pos in range(len(s)):
            face = s[:pos] + s[pos + 1:]
            M[idx[face]][j] = -1 if pos % 2 else 1
    return M


def classical_b2(T: Triangulation) -> int:
    """``dim ker d2 - rank d3`` over the rationals."""
    if not T.is_closed():
        raise TriangulationError("classical_b2 needs a closed triangulation")
    d2 = boundary_matrix(T, 2)
    d3 = boundary_matrix(T, 3)
    n2 = len(T.simplices(2))
    return (n2 - rank(d2)) - rank(d3)


def random_edge_chain(T: Triangulation, rng) -> dict[Simplex, Fraction]:
    """Uniform random rationals on the inner edges; ``rng`` may be a seed."""
    import numpy as np
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return {b: random_rational(rng) for b in sorted(classify(T).inner_edges)}


def zero_edge_chain(T: Triangulation) -> dict[Simplex, Fraction]:
    return {b: Fraction(0) for b in sorted(classify(T).inner_edges)}
