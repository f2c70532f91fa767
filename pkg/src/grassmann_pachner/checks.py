"""Acceptance checks shared by the test suite and the ``selftest`` command.

Every check takes a ``numpy.random.Generator`` and returns a
:class:`CheckResult`; sizes default to the documented acceptance levels.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from .complexes import boundary_delta5, builtin_move, faces, random_walk
from .errors import DegenerateError
from .family import move_registry
from .grassmann import GeneratorRegistry, GrassmannElement, Parity, exponential
from .homology import build_chain_maps, classical_b2, exotic_betti, random_coords, random_edge_chain
from .linalg import rank
from .operators import (FirstOrderOperator, OperatorSpace, annihilator_element, apply,
                        gaussian_coefficients, gaussian_space, pairing)
from .relations import run_family_resampling, verify_24, verify_33
from .scalars import EXACT, random_rational
from .weights import (FaceFactorTable, allowable_h, assign_weights, edge_operator, edge_weight,
                      explicit_isotropic_vectors, form_matrix)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = dc_field(default_factory=list)

    def line(self, timing: bool = True) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; {self.seconds:.2f}s" if timing else ""
        return f"[{status}] criterion {self.number}: {self.name} ({self.detail}{extra})"


class _Tally:
    def __init__(self):
        self.failures: list[str] = []

    def require(self, cond: bool, msg: str) -> None:
        if not cond:
            self.failures.append(msg)


# -- random helpers ------------------------------------------------------------

def random_element(reg: GeneratorRegistry, rng, max_terms: int = 6, degree: int | None = None,
                   bound: int = 50) -> GrassmannElement:
    n = len(reg)
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        if degree is None:
            m = int(rng.integers(0, 1 << n))
        else:
            bits = rng.choice(n, size=degree, replace=False)
            m = sum(1 << int(b) for b in bits)
        terms[m] = terms.get(m, 0) + random_rational(rng, bound)
    return GrassmannElement(reg, terms)


def random_antisymmetric(n: int, rng, bound: int = 50) -> list[list[Fraction]]:
    A = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            v = random_rational(rng, bound)
            A[a][b], A[b][a] = v, -v
    return A


def random_invertible(n: int, rng, bound: int = 20) -> list[list[Fraction]]:
    while True:
        M = [[Fraction(int(rng.integers(-bound, bound + 1))) for _ in range(n)] for _ in range(n)]
        if rank(M) == n:
            return M


def mix_space(V: OperatorSpace, M) -> OperatorSpace:
    """Basis ``sum_j M[i][j] V_j``: same span, different basis."""
    reg = V.registry
    out = []
    for row in M:
        D = FirstOrderOperator.zero(reg)
        for c, B in zip(row, V.basis):
            if c != 0:
                D = D + B.scale(c)
        out.append(D)
    return OperatorSpace(out)


def general_coords(rng, family: int, vertices=range(1, 7)) -> dict:
    """Random coordinates avoiding every vanishing denominator of the move computations."""
    while True:
        coords = random_coords(list(vertices), rng, family)
        phi = FaceFactorTable(coords, family)
        try:
            if all(phi.value(f) != 0 for f in faces(tuple(vertices), 2)):
                if family == 1:
                    xs = [c[0] for c in coords.values()]
                    if len(set(xs)) == len(xs) and all(1 + a * b != 0 for a in xs for b in xs):
                        return coords
                else:
                    return coords
        except DegenerateError:
            pass


# -- criterion 1 -----------------------------------------------------------------

def check_grassmann_kernel(rng, cases: int = 1000) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    reg = GeneratorRegistry([1, 2, 3, 4])
    x = [reg.generator(k) for k in (1, 2, 3, 4)]
    f = x[0] * x[1] + x[2] * x[3]
    expected = reg.one() + x[0] * x[1] + x[2] * x[3] + x[0] * x[1] * x[2] * x[3]
    tl.require(exponential(f) == expected, "worked exponential example")
    big = GeneratorRegistry(range(6))
    for _ in range(cases):
        i, j = (int(v) for v in rng.choice(6, size=2, replace=False))
        xi = big.generator(i)
        tl.require((xi * xi).is_zero(), "x_i^2 = 0")
        tl.require(xi.integrate([i]) == big.one(), "int x_i dx_i = 1")
        tl.require(big.one().integrate([i]).is_zero(), "int dx_i = 0")
        df = int(rng.integers(0, 7))
        a = random_element(big, rng, degree=df)
        b = random_element(big, rng)
        eps = -1 if df % 2 else 1
        lhs = (a * b).left_derivative(i)
        rhs = a.left_derivative(i) * b + (a * b.left_derivative(i)).scale(eps)
        tl.require(lhs == rhs, "left Leibniz rule")
        dg = int(rng.integers(0, 7))
        c = random_element(big, rng, degree=dg)
        eps = -1 if dg % 2 else 1
        lhs = (b * c).right_derivative(i)
        rhs = b * c.right_derivative(i) + (b.right_derivative(i) * c).scale(eps)
        tl.require(lhs == rhs, "right Leibniz rule")
        tl.require(b.integrate([i, j]) == b.integrate([i]).integrate([j]), "Fubini rule")
    dt = time.perf_counter() - t0
    return CheckResult(1, "Grassmann kernel", not tl.failures, f"{cases} property cases", dt, tl.failures)


# -- criterion 2 --------------------------------------------------------------

def check_family1_33(rng, draws: int = 25) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    for k in range(draws):
        rep = verify_33(1, general_coords(rng, 1), field=EXACT)
        tl.require(rep.equal and rep.residual == 0.0, f"draw {k}: sides differ")
        tl.require(rep.lhs_value.parity() is Parity.ODD, f"draw {k}: side is not odd")
    dt = time.perf_counter() - t0
    return CheckResult(2, "family 1, 3-3 relation", not tl.failures, f"{draws} exact draws", dt, tl.failures)


# -- criterion 3 --------------------------------------------------------------

def family2_local_properties(coords, h, tl: _Tally, label: str) -> None:
    """Rank-2 forms, the ``h exp(Phi/h)`` identity and the edge equations on both moves."""
    phi = FaceFactorTable(coords, 2)
    for kind in ("3-3", "2-4"):
        move = builtin_move(kind)
        reg = move_registry(move)
        for side in (move.lhs, move.rhs):
            W = assign_weights(side, phi, reg, h)
            for u in side.pentachora:
                Phi = W.forms[u]
                gens = [reg.index(t) for t in faces(u, 3)]
                M = form_matrix(Phi, gens)
                tl.require(rank(M) == 2, f"{label}: Phi_{u} does not have rank 2")
                tl.require((Phi * Phi).is_zero(), f"{label}: Phi_{u}^2 != 0")
                hu = W.free_terms[u]
                if hu != 0:
                    tl.require(exponential(Phi / hu).scale(hu) == W[u], f"{label}: h exp(Phi/h) != h + Phi on {u}")
                for a in faces(u, 1):
                    D = edge_operator(a, side, phi, reg)
                    tl.require(apply(D, W[u]).is_zero(), f"{label}: edge equation fails for {a} on {u}")


def check_family2(rng, draws: int = 25) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    glued = builtin_move("3-3").glued
    for k in range(draws):
        coords = general_coords(rng, 2)
        chain = {} if k == 0 else random_edge_chain(glued, rng)
        phi = FaceFactorTable(coords, 2)
        h33 = allowable_h(builtin_move("3-3"), chain, phi)
        r33 = verify_33(2, coords, h33, field=EXACT)
        tl.require(r33.equal, f"draw {k}: 3-3 sides differ")
        r24 = verify_24(coords, chain, field=EXACT)
        tl.require(r24.equal, f"draw {k}: 2-4 sides differ")
        for rep, nm in ((r33, "3-3"), (r24, "2-4")):
            tl.require(rep.lhs_value.parity() is Parity.ODD, f"draw {k}: {nm} side not odd")
        if k == 0:
            tl.require(r33.lhs_value.degrees() == {3}, "zero chain: 3-3 side not of pure degree 3")
        family2_local_properties(coords, h33, tl, f"draw {k}")
    dt = time.perf_counter() - t0
    return CheckResult(3, "family 2, 3-3 and 2-4 relations", not tl.failures,
                       f"{draws} exact draws incl. zero chain", dt, tl.failures)


# -- criterion 4 --------------------------------------------------------------

def random_edge_kernel_element(coords, rng) -> GrassmannElement:
    """A random odd element killed by the 2-4 edge operator of 56."""
    move = builtin_move("2-4")
    reg = move_registry(move)
    phi = FaceFactorTable(coords, 2)
    D = edge_operator((5, 6), move.rhs, phi, reg)
    supp = sorted(D.beta)
    others = [k for k in range(len(reg)) if k not in D.beta]

    def linear():
        c = {t: random_rational(rng, 50) for t in supp[1:]}
        s = sum(D.beta[t] * v for t, v in c.items())
        c[supp[0]] = -s / D.beta[supp[0]]
        return GrassmannElement(reg, {1 << t: v for t, v in c.items()})

    l1, l2, l3, l4 = linear(), linear(), linear(), linear()
    b = reg.generator(reg.label(others[int(rng.integers(len(others)))]))
    b2 = reg.generator(reg.label(others[int(rng.integers(len(others)))]))
    out = l1 + l2 * l3 * l4 + (b * b2 * l4).scale(random_rational(rng, 50))
    assert apply(D, out).is_zero()
    return out


def check_edge_weight_invariance(rng, kernels: int = 10) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    coords = general_coords(rng, 2)
    chain = random_edge_chain(builtin_move("2-4").glued, rng)
    base = verify_24(coords, chain)
    tl.require(base.equal, "base 2-4 relation fails")
    move = builtin_move("2-4")
    reg = move_registry(move)
    phi = FaceFactorTable(coords, 2)
    w = edge_weight((5, 6), move.rhs, phi, reg)
    for k in range(kernels):
        wt = random_edge_kernel_element(coords, rng)
        rep = verify_24(coords, chain, w_choice=w + wt)
        tl.require(rep.rhs_value == base.rhs_value, f"kernel element {k} changes the right-hand side")
    dt = time.perf_counter() - t0
    return CheckResult(4, "edge-weight invariance", not tl.failures, f"{kernels} kernel elements", dt, tl.failures)


# -- criterion 5 --------------------------------------------------------------

def check_chain_and_exactness(rng, walks: int = 10, length: int = 10) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    S = boundary_delta5()
    rep = exotic_betti(S, random_coords(S.vertices, rng), trials=1, rng=rng)
    tl.require(rep.chain_ok, "G4 G3 != 0 on the 5-simplex boundary")
    tl.require(rep.rank_g3 == 3 and rep.rank_g4 == 3, f"ranks {rep.rank_g3}, {rep.rank_g4} instead of 3, 3")
    tl.require(rep.exotic_dim == 0 == 6 * classical_b2(S), "exotic dimension differs from 6 b2")
    for k in range(walks):
        T, _ = random_walk(S, length, rng)
        maps = build_chain_maps(T, random_coords(T.vertices, rng))
        tl.require(maps.is_chain(), f"walk {k}: G4 G3 != 0")
    dt = time.perf_counter() - t0
    return CheckResult(5, "chain property and exactness", not tl.failures,
                       f"sphere ranks 3/3, {walks} walks of length {length}", dt, tl.failures)


# -- criterion 6 --------------------------------------------------------------

def check_isotropic_family(rng, draws: int = 10) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    worst = 0.0
    for k in range(draws):
        run = run_family_resampling(rng)
        tl.require(run.basis_max_pairing < 1e-10, f"draw {k}: basis pairing {run.basis_max_pairing:.2e}")
        for u, pv in run.weights.parities.items():
            tl.require(pv is Parity.EVEN, f"draw {k}: weight on {u} is not even")
            tl.require(len(run.weights.spaces[u]) == 5, f"draw {k}: space on {u} is not 5-dimensional")
        ann = max(run.annihilation_residuals.values())
        tl.require(ann < 1e-8, f"draw {k}: annihilation residual {ann:.2e}")
        r = run.report
        tl.require(r.equal and r.residual < 1e-8, f"draw {k}: proportionality residual {r.residual:.2e}")
        v9 = max(r.details["v9_lhs_residual"], r.details["v9_rhs_residual"])
        tl.require(v9 < 1e-8, f"draw {k}: V9 residual {v9:.2e}")
        worst = max(worst, ann, r.residual, v9)
    dt = time.perf_counter() - t0
    return CheckResult(6, "18-parameter isotropic family", not tl.failures,
                       f"{draws} draws, worst residual {worst:.1e}", dt, tl.failures)


# -- criterion 7 --------------------------------------------------------------

def check_explicit_vectors(rng, draws: int = 25) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    move = builtin_move("3-3")
    reg = move_registry(move)
    for k in range(draws):
        coords = general_coords(rng, 1)
        phi = FaceFactorTable(coords, 1)
        vecs = {}
        for side in (move.lhs, move.rhs):
            W = assign_weights(side, phi, reg)
            for u in side.pentachora:
                v = explicit_isotropic_vectors(u, coords, reg, move)
                vecs[u] = v
                tl.require(apply(v, W[u]).is_zero(), f"draw {k}: vector on {u} does not annihilate")
        for a in vecs.values():
            for b in vecs.values():
                tl.require(pairing(a, b) == 0, f"draw {k}: nonzero pairing")
    dt = time.perf_counter() - t0
    return CheckResult(7, "explicit isotropic vectors", not tl.failures, f"{draws} exact draws", dt, tl.failures)


# -- criterion 8 --------------------------------------------------------------

def check_round_trip(rng, cases: int = 100) -> CheckResult:
    t0 = time.perf_counter()
    tl = _Tally()
    reg = GeneratorRegistry(range(5))
    idx = list(range(5))
    for k in range(cases):
        alpha = random_antisymmetric(5, rng)
        V = gaussian_space(reg, idx, alpha)
        mixed = mix_space(V, random_invertible(5, rng))
        gc = gaussian_coefficients(mixed, idx)
        tl.require([list(r) for r in gc.alpha] == alpha, f"case {k}: alpha not recovered")
        W, par = annihilator_element(V, idx)
        tl.require(par is Parity.EVEN and W == gc.weight(reg), f"case {k}: annihilator differs from exp")
        nswap = int(rng.integers(1, 6))
        swapped = [int(v) for v in rng.choice(5, size=nswap, replace=False)]
        Vs = OperatorSpace([D.swap(swapped) for D in V.basis])
        _, ps = annihilator_element(Vs, idx)
        want = Parity.ODD if nswap % 2 else Parity.EVEN
        tl.require(ps is want, f"case {k}: swapping {nswap} indices gave {ps.value}")
    dt = time.perf_counter() - t0
    return CheckResult(8, "round-trip solvers and parity rule", not tl.failures, f"{cases} exact cases", dt, tl.failures)


CHECKS: dict[int, Callable] = {
    1: check_grassmann_kernel,
    2: check_family1_33,
    3: check_family2,
    4: check_edge_weight_invariance,
    5: check_chain_and_exactness,
    6: check_isotropic_family,
    7: check_explicit_vectors,
    8: check_round_trip,
}


def run_all(seed: int = 0, only=None) -> list[CheckResult]:
    """Every check with its own child seed of ``seed``, in criterion order."""
    children = np.random.SeedSequence(seed).spawn(len(CHECKS))
    out = []
    for (num, fn), ss in zip(CHECKS.items(), children):
        if only and num not in only:
            continue
        out.append(fn(np.random.default_rng(ss)))
    return out
