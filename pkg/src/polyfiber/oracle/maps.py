"""Rebuild the polynomial map from a configuration and check its multipliers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from polyfiber.errors import CertificationFailure, DomainError
from polyfiber.exact import gr_to_float
from polyfiber.oracle.homotopy import NumericSolution
from polyfiber.spectrum import ResidueVector, SpectrumInput, residues_from_eigenvalues

__all__ = ["PolynomialRep", "reconstruct_map"]


@dataclass
class PolynomialRep:
    """``f(z) = z + rho * prod_i (z - zeta_i)`` with ``zeta_d = 0``."""

    rho: complex
    fixed_points: Tuple[complex, ...]
    multipliers: Tuple[complex, ...]
    multiplier_residual: float
    index_sum: complex

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return z + self.rho * np.prod([z - c for c in self.fixed_points], axis=0)

    def derivative(self, z: complex) -> complex:
        pts = self.fixed_points
        total = 0j
        for i in range(len(pts)):
            term = self.rho
            for j, c in enumerate(pts):
                if j != i:
                    term *= z - c
            total += term
        return 1 + total

    def to_dict(self) -> dict:
        return {
            "rho": [self.rho.real, self.rho.imag],
            "multiplier_residual": self.multiplier_residual,
            "index_sum_abs": abs(self.index_sum),
        }


def reconstruct_map(p: NumericSolution, s) -> PolynomialRep:
    """Map with fixed points ``(zeta_1..zeta_{d-2}, 1, 0)`` and the given
    multipliers.

    ``rho`` comes from ``-1/rho = sum_{i<d} m_i zeta_i^{d-1}``.  The
    derivatives are evaluated on the configuration rescaled to unit size (an
    affine conjugacy, so the multipliers do not change), which keeps the
    products well conditioned; ``rho`` is reported in the original chart.
    """
    if p.classification != "S":
        raise DomainError("reconstruction needs a regular configuration")
    if isinstance(s, SpectrumInput):
        lam = np.array([gr_to_float(v) for v in s.eigenvalues])
        m = residues_from_eigenvalues(s)
    else:
        m = s if isinstance(s, ResidueVector) else ResidueVector(s)
        lam = np.array([1 - 1 / gr_to_float(v) for v in m.residues])
    mf = np.array([gr_to_float(v) for v in m.residues])
    full = p.full_point()
    d = len(full)
    if d != len(mf):
        raise DomainError("configuration and spectrum have different degrees")
    scale = np.max(np.abs(full))
    z = full / scale
    power_sum = np.sum(mf[:-1] * z[:-1] ** (d - 1))
    if abs(power_sum) <= 1e-13 * np.sum(np.abs(mf[:-1] * z[:-1] ** (d - 1))):
        raise CertificationFailure("sum m_i zeta_i^(d-1) vanishes numerically; rho undetermined")
    rho_unit = -1 / power_sum
    mult = []
    for i in range(d):
        prod = 1 + 0j
        for j in range(d):
            if j != i:
                prod *= z[i] - z[j]
        mult.append(1 + rho_unit * prod)
    mult = np.array(mult)
    return PolynomialRep(
        rho=complex(rho_unit / scale ** (d - 1)),
        fixed_points=tuple(complex(v) for v in full),
        multipliers=tuple(complex(v) for v in mult),
        multiplier_residual=float(np.max(np.abs(mult - lam))),
        index_sum=complex(np.sum(1 / (1 - mult))),
    )
