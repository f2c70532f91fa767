"""Grassmann-algebra weights for 4-dimensional Pachner moves and their verification."""
from __future__ import annotations

__version__ = "0.1.0"

from .complexes import (Triangulation, apply_bistellar, builtin_move, classify, orient, read_triangulation,
                        sphere_product_s2s2)
from .grassmann import GeneratorRegistry, GrassmannElement, Parity, berezin_integrate, exponential
from .homology import build_chain_maps, classical_b2, exotic_betti
from .operators import FirstOrderOperator, OperatorSpace, annihilator_element, gaussian_coefficients, pairing
from .relations import verify_24, verify_33, verify_33_general
from .scalars import EXACT, FLOAT, GaussianRational, circle_point

__all__ = [
    "EXACT", "FLOAT", "FirstOrderOperator", "GaussianRational", "GeneratorRegistry", "GrassmannElement",
    "OperatorSpace", "Parity", "Triangulation", "annihilator_element", "apply_bistellar",
    "berezin_integrate", "build_chain_maps", "builtin_move", "circle_point", "classical_b2", "classify",
    "exotic_betti", "exponential", "gaussian_coefficients", "orient", "pairing", "read_triangulation",
    "sphere_product_s2s2",
    "verify_24", "verify_33", "verify_33_general",
]
