"""Random spectra for tests, scans and benchmarks (seeded, reproducible)."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional

from polyfiber.combinatorics import symmetry_profile, zero_sum_masks
from polyfiber.exact import GaussianRational
from polyfiber.spectrum import ResidueVector, SpectrumInput, eigenvalues_from_residues

__all__ = [
    "random_gaussian_rational",
    "random_generic_residues",
    "random_generic_spectrum",
    "random_structured_residues",
]


def random_gaussian_rational(rng: random.Random, num: int = 9, den: int = 5) -> GaussianRational:
    return GaussianRational(
        Fraction(rng.randint(-num, num), rng.randint(1, den)),
        Fraction(rng.randint(-num, num), rng.randint(1, den)),
    )


def _close(values: List[GaussianRational]) -> Optional[ResidueVector]:
    last = -sum(values, GaussianRational(0))
    values = values + [last]
    if any(v.is_zero() for v in values):
        return None
    return ResidueVector(values)


def random_generic_residues(d: int, rng: random.Random) -> ResidueVector:
    """Residues with no zero-sum proper subset and pairwise distinct entries."""
    while True:
        m = _close([random_gaussian_rational(rng) for _ in range(d - 1)])
        if m is None or len(set(m.residues)) != d:
            continue
        if not zero_sum_masks(m):
            return m


def random_generic_spectrum(d: int, rng: random.Random) -> SpectrumInput:
    return eigenvalues_from_residues(random_generic_residues(d, rng))


def _integer_vector(d: int, rng: random.Random, bound: int) -> Optional[ResidueVector]:
    return _close([GaussianRational(rng.choice([v for v in range(-bound, bound + 1) if v])) for _ in range(d - 1)])


def _repeated_values(d: int, rng: random.Random) -> Optional[ResidueVector]:
    """A few distinct values with multiplicities, closed by one extra entry."""
    q = rng.randint(1, max(1, d // 2))
    values = [random_gaussian_rational(rng, num=4, den=2) for _ in range(q)]
    body = [rng.choice(values) for _ in range(d - 1)]
    return _close(body)


def _cancelling(d: int, rng: random.Random) -> Optional[ResidueVector]:
    """Some residues paired with their negatives, the rest generic."""
    pairs = rng.randint(1, (d - 1) // 2)
    body = []
    for _ in range(pairs):
        v = random_gaussian_rational(rng, num=5, den=3)
        body += [v, -v]
    body += [random_gaussian_rational(rng) for _ in range(d - 1 - len(body))]
    rng.shuffle(body)
    return _close(body)


def random_structured_residues(d: int, rng: random.Random, kind: Optional[str] = None) -> ResidueVector:
    """Random residues drawn from one of several families, chosen at random
    unless ``kind`` is given: ``generic``, ``integer`` (small integer
    entries, rich in zero-sum subsets and repeats), ``repeated`` (few
    distinct values) or ``cancelling`` (pairs ``v, -v``)."""
    makers = {
        "generic": lambda: random_generic_residues(d, rng),
        "integer": lambda: _integer_vector(d, rng, 3),
        "repeated": lambda: _repeated_values(d, rng),
        "cancelling": lambda: _cancelling(d, rng),
    }
    kind = kind or rng.choice(sorted(makers))
    while True:
        m = makers[kind]()
        if m is not None and symmetry_profile(m).q >= 2:
            return m
