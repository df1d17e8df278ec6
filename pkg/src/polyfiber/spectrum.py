"""Fixed-point multiplier spectra and their residue vectors.

A spectrum ``lam = (lam_1, ..., lam_d)`` of a degree-d polynomial with d
simple fixed points is tied to its residues ``m_i = 1/(1 - lam_i)``, which
always sum to zero.  Both presentations are exact tuples of
:class:`~polyfiber.exact.GaussianRational`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from polyfiber.errors import InvalidSpectrumError
from polyfiber.exact import GaussianRational, gr, gr_format, gr_invert, gr_sum

__all__ = [
    "SpectrumInput",
    "ResidueVector",
    "residues_from_eigenvalues",
    "eigenvalues_from_residues",
    "validate_v_d",
    "residue",
    "multiplier",
]

ONE = GaussianRational(1)


def residue(lam: GaussianRational) -> GaussianRational:
    """``m(z) = 1/(1 - z)``."""
    return gr_invert(ONE - lam)


def multiplier(m: GaussianRational) -> GaussianRational:
    """Inverse of :func:`residue`: ``1 - 1/m``."""
    return ONE - gr_invert(m)


def _as_tuple(values: Iterable) -> Tuple[GaussianRational, ...]:
    return tuple(gr(v) for v in values)


@dataclass(frozen=True)
class SpectrumInput:
    eigenvalues: Tuple[GaussianRational, ...]

    def __init__(self, eigenvalues: Iterable):
        object.__setattr__(self, "eigenvalues", _as_tuple(eigenvalues))

    @property
    def d(self) -> int:
        return len(self.eigenvalues)

    def to_strings(self) -> List[str]:
        return [gr_format(v) for v in self.eigenvalues]


@dataclass(frozen=True)
class ResidueVector:
    """Residues ``m_1..m_d``; every entry nonzero and the total exactly zero.

    ``scaled`` is False when the vector was supplied only up to a common
    factor, in which case it fixes a ratio class and not actual multipliers.
    """

    residues: Tuple[GaussianRational, ...]
    scaled: bool = True

    def __init__(self, residues: Iterable, scaled: bool = True, check: bool = True):
        object.__setattr__(self, "residues", _as_tuple(residues))
        object.__setattr__(self, "scaled", scaled)
        if check:
            zeros = [i + 1 for i, v in enumerate(self.residues) if v.is_zero()]
            if zeros:
                raise InvalidSpectrumError(f"zero residue at index {zeros}")
            total = gr_sum(self.residues)
            if total:
                raise InvalidSpectrumError(f"residue sum != 0 (sum = {gr_format(total)}); not in V_d")

    @property
    def d(self) -> int:
        return len(self.residues)

    def __len__(self):
        return len(self.residues)

    def __iter__(self):
        return iter(self.residues)

    def __getitem__(self, i):
        return self.residues[i]

    def restrict(self, indices: Sequence[int]) -> "ResidueVector":
        """Sub-vector on 0-based ``indices``; valid when they form a zero-sum set."""
        return ResidueVector([self.residues[i] for i in indices], scaled=self.scaled)

    def scale(self, factor) -> "ResidueVector":
        factor = gr(factor)
        return ResidueVector([factor * v for v in self.residues], scaled=False)

    def to_strings(self) -> List[str]:
        return [gr_format(v) for v in self.residues]


def validate_v_d(s: SpectrumInput) -> List[str]:
    """List every violated V_d condition; an empty list means ``s`` is in V_d."""
    problems = []
    residues = []
    for i, lam in enumerate(s.eigenvalues, start=1):
        if lam == ONE:
            problems.append(f"lambda_{i} = 1")
        else:
            residues.append(residue(lam))
    if not problems:
        total = gr_sum(residues)
        if total:
            problems.append(f"residue sum != 0 (sum = {gr_format(total)})")
    return problems


def residues_from_eigenvalues(s: SpectrumInput) -> ResidueVector:
    ones = [i for i, lam in enumerate(s.eigenvalues, start=1) if lam == ONE]
    if ones:
        raise InvalidSpectrumError(f"lambda_{ones[0]} = 1: not in V_d")
    return ResidueVector([residue(lam) for lam in s.eigenvalues])


def eigenvalues_from_residues(m: ResidueVector) -> SpectrumInput:
    zeros = [i for i, v in enumerate(m.residues, start=1) if v.is_zero()]
    if zeros:
        raise InvalidSpectrumError(f"zero residue at index {zeros}")
    return SpectrumInput([multiplier(v) for v in m.residues])
