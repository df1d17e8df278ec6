"""Quotient of the numerical configurations by the permutations of equal
multipliers, with stabilizers read off the action itself."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from polyfiber.combinatorics import SymmetryProfile
from polyfiber.errors import CertificationFailure
from polyfiber.oracle.homotopy import NumericSolution

__all__ = ["Orbit", "OrbitDecomposition", "group_elements", "act", "orbit_quotient"]


@dataclass
class Orbit:
    representative: NumericSolution
    members: List[int]
    size: int
    stabilizer_order: int
    zero_block: Optional[int]
    cyclic: bool

    def to_dict(self) -> dict:
        return {
            "members": self.members,
            "size": self.size,
            "stabilizer_order": self.stabilizer_order,
            "zero_block": self.zero_block,
            "cyclic": self.cyclic,
        }


@dataclass
class OrbitDecomposition:
    orbits: List[Orbit]
    group_order: int

    def __len__(self):
        return len(self.orbits)

    def stabilizer_histogram(self) -> dict:
        out = {}
        for o in self.orbits:
            key = (o.zero_block, o.stabilizer_order) if o.stabilizer_order > 1 else (None, 1)
            out[key] = out.get(key, 0) + 1
        return out


def group_elements(profile: SymmetryProfile) -> Iterator[Tuple[int, ...]]:
    """Every permutation (0-based image tuple) preserving each class."""
    d = profile.d
    blocks = [[i - 1 for i in b] for b in profile.blocks]
    for images in itertools.product(*(itertools.permutations(b) for b in blocks)):
        sigma = list(range(d))
        for block, img in zip(blocks, images):
            for src, dst in zip(block, img):
                sigma[src] = dst
        yield tuple(sigma)


def act(sigma: Sequence[int], points: np.ndarray) -> np.ndarray:
    """Apply ``sigma`` to rows ``(z_1..z_{d-2}, 1, 0)`` and renormalize.

    The new coordinates are ``z_{sigma^-1(i)} - z_{sigma^-1(d)}``, rescaled so
    that coordinate ``d-1`` is 1 again.
    """
    d = points.shape[1]
    inv = np.empty(d, dtype=int)
    inv[np.asarray(sigma)] = np.arange(d)
    moved = points[:, inv] - points[:, [inv[d - 1]]]
    return moved / moved[:, [d - 2]]


def _order(sigma: Sequence[int]) -> int:
    seen = set()
    out = 1
    for start in range(len(sigma)):
        if start in seen:
            continue
        length = 0
        i = start
        while i not in seen:
            seen.add(i)
            i = sigma[i]
            length += 1
        out = out * length // gcd(out, length)
    return out


def _match(images: np.ndarray, points: np.ndarray, tol: float) -> np.ndarray:
    scale = 1 + np.max(np.abs(points), axis=1)
    dist = np.max(np.abs(images[:, None, :] - points[None, :, :]), axis=2)
    close = dist <= tol * scale[None, :]
    hits = close.sum(axis=1)
    if np.any(hits == 0):
        raise CertificationFailure("a group image matches no computed solution")
    if np.any(hits > 1):
        raise CertificationFailure("ambiguous match: two solutions within the dedup tolerance")
    return np.argmax(close, axis=1)


def orbit_quotient(points: List[NumericSolution], profile: SymmetryProfile, tol: float = 1e-6) -> OrbitDecomposition:
    """Split ``points`` into orbits and compute each stabilizer exactly from
    the permutations that map the representative onto itself."""
    order = profile.group_order()
    if not points:
        return OrbitDecomposition([], order)
    full = np.array([p.full_point() for p in points])
    elements = list(group_elements(profile))
    image_index = np.array([_match(act(s, full), full, tol) for s in elements])
    unseen = set(range(len(points)))
    orbits = []
    for rep in range(len(points)):
        if rep not in unseen:
            continue
        members = sorted(set(image_index[:, rep].tolist()))
        unseen.difference_update(members)
        stab = [elements[g] for g in range(len(elements)) if image_index[g, rep] == rep]
        if len(members) * len(stab) != order:
            raise CertificationFailure(
                f"orbit size {len(members)} times stabilizer {len(stab)} != group order {order}"
            )
        zero_block = None
        cyclic = True
        if len(stab) > 1:
            centred = full[rep] - full[rep].mean()
            scale = np.max(np.abs(centred))
            zeros = np.flatnonzero(np.abs(centred) <= tol * scale)
            if len(zeros) != 1:
                raise CertificationFailure(
                    f"stabilized configuration has {len(zeros)} coordinates at its centre, expected 1"
                )
            zero_block = profile.block_of(int(zeros[0]) + 1)
            cyclic = max(_order(s) for s in stab) == len(stab)
        orbits.append(Orbit(points[rep], members, len(members), len(stab), zero_block, cyclic))
    return OrbitDecomposition(orbits, order)
