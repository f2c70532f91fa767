"""Acceptance criteria 1-8 at their stated sizes and tolerances.

Each test prints one ``[PASS]``/``[FAIL]`` line; run with ``-s`` to see them
inline.  Seeds are derived from one master seed, so the run is reproducible.
"""
from __future__ import annotations

import numpy as np
import pytest

from grassmann_pachner.checks import CHECKS
from grassmann_pachner.complexes import sphere_product_s2s2
from grassmann_pachner.homology import exotic_betti

MASTER_SEED = 0
SIZES = {
    1: {"cases": 1000},
    2: {"draws": 25},
    3: {"draws": 25},
    4: {"kernels": 10},
    5: {"walks": 10, "length": 10},
    6: {"draws": 10},
    7: {"draws": 25},
    8: {"cases": 100},
}
TIME_LIMITS = {1: 1.0, 2: 30.0, 6: 120.0}
CHILD_SEEDS = dict(zip(CHECKS, np.random.SeedSequence(MASTER_SEED).spawn(len(CHECKS))))


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, capsys):
    result = CHECKS[number](np.random.default_rng(CHILD_SEEDS[number]), **SIZES[number])
    limit = TIME_LIMITS.get(number)
    if limit is not None and result.seconds >= limit:
        result.passed = False
        result.failures.append(f"runtime {result.seconds:.2f}s exceeds {limit:.0f}s")
    with capsys.disabled():
        print("\n" + result.line())
        for f in result.failures[:10]:
            print(f"    {f}")
    assert result.passed, result.failures[:10]


def test_closed_manifold_beyond_the_sphere(capsys):
    rep = exotic_betti(sphere_product_s2s2(), trials=1, rng=np.random.default_rng(MASTER_SEED))
    ok = rep.chain_ok and rep.exotic_dim == 6 * rep.classical_b2 and rep.classical_b2 == 2
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] supplement: S2 x S2 exotic_dim={rep.exotic_dim}, "
              f"classical_b2={rep.classical_b2}")
    assert ok
