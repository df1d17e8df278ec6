"""Numerical certification of the exact counts."""

from polyfiber.oracle.certify import Certification, certify
from polyfiber.oracle.confluent import (
    confluent_block_determinant,
    confluent_closed_form,
    confluent_matrix,
)
from polyfiber.oracle.homotopy import NumericSolution, SolveResult, SolverConfig, enumerate_solutions
from polyfiber.oracle.maps import PolynomialRep, reconstruct_map
from polyfiber.oracle.orbits import Orbit, OrbitDecomposition, orbit_quotient

__all__ = [
    "Certification",
    "certify",
    "SolverConfig",
    "NumericSolution",
    "SolveResult",
    "enumerate_solutions",
    "Orbit",
    "OrbitDecomposition",
    "orbit_quotient",
    "PolynomialRep",
    "reconstruct_map",
    "confluent_matrix",
    "confluent_block_determinant",
    "confluent_closed_form",
]
