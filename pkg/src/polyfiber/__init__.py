"""Exact counting of polynomial maps by fixed-point multipliers.

The number of affine conjugacy classes of degree-d polynomial maps whose
fixed-point multipliers are a given spectrum depends only on which residue
subsets sum to zero and which multipliers coincide.  :func:`fiber_count`
evaluates it exactly; :mod:`polyfiber.oracle` checks it numerically.
"""

from polyfiber.counting import (
    FiberReport,
    emptiness_by_integer_ratio,
    fiber_count,
    multiplicity_product,
    multiplicity_recursive,
    orbit_counts,
    point_count,
    scaled_spectrum,
)
from polyfiber.combinatorics import (
    stratum_signature,
    symmetry_profile,
    zero_sum_partitions,
    zero_sum_subsets,
)
from polyfiber.exact import GaussianRational, gr_format, gr_invert, gr_parse, gr_to_float
from polyfiber.kernels import BACKEND
from polyfiber.spectrum import (
    ResidueVector,
    SpectrumInput,
    eigenvalues_from_residues,
    residues_from_eigenvalues,
    validate_v_d,
)

__version__ = "1.0.0"

__all__ = [
    "BACKEND",
    "GaussianRational",
    "gr_parse",
    "gr_format",
    "gr_invert",
    "gr_to_float",
    "SpectrumInput",
    "ResidueVector",
    "residues_from_eigenvalues",
    "eigenvalues_from_residues",
    "validate_v_d",
    "zero_sum_subsets",
    "zero_sum_partitions",
    "symmetry_profile",
    "stratum_signature",
    "multiplicity_recursive",
    "multiplicity_product",
    "point_count",
    "scaled_spectrum",
    "orbit_counts",
    "fiber_count",
    "emptiness_by_integer_ratio",
    "FiberReport",
]
