"""Combinatorial signature of a residue vector.

Subsets and blocks are held internally as 0-based bit masks; everything that
leaves the module through :meth:`IndexSubset.members` or the serializers is
1-based, matching the usual indexing of the multipliers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from polyfiber import kernels
from polyfiber.exact import GaussianRational
from polyfiber.spectrum import ResidueVector, SpectrumInput, residues_from_eigenvalues

__all__ = [
    "IndexSubset",
    "ZeroSumPartition",
    "SymmetryProfile",
    "StratumSignature",
    "zero_sum_subsets",
    "zero_sum_partitions",
    "refines",
    "symmetry_profile",
    "stratum_signature",
    "mask_members",
    "members_mask",
]

# beyond this the subset walk is too slow to be useful
MAX_DIRECT_D = 24


def mask_members(mask: int) -> Tuple[int, ...]:
    """1-based members of a bit mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def members_mask(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        mask |= 1 << (i - 1)
    return mask


@dataclass(frozen=True, order=True)
class IndexSubset:
    members: Tuple[int, ...]

    @classmethod
    def from_mask(cls, mask: int) -> "IndexSubset":
        return cls(mask_members(mask))

    @property
    def mask(self) -> int:
        return members_mask(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, i):
        return i in self.members

    def __iter__(self):
        return iter(self.members)


def _partition_key(blocks: Sequence[int]):
    return tuple(mask_members(b) for b in blocks)


@dataclass(frozen=True)
class ZeroSumPartition:
    """A partition of {1..d} into at least two zero-sum blocks.

    ``blocks`` are masks ordered by smallest member.
    """

    blocks: Tuple[int, ...]

    def __init__(self, blocks: Iterable):
        masks = [b if isinstance(b, int) else members_mask(b) for b in blocks]
        masks.sort(key=lambda b: b & -b)
        object.__setattr__(self, "blocks", tuple(masks))

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(bin(b).count("1") for b in self.blocks)

    def as_lists(self) -> List[List[int]]:
        return [list(mask_members(b)) for b in self.blocks]

    def sort_key(self):
        return _partition_key(self.blocks)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        inner = ", ".join("{" + ",".join(map(str, mask_members(b))) + "}" for b in self.blocks)
        return f"ZeroSumPartition({inner})"


@dataclass(frozen=True)
class SymmetryProfile:
    """Equal-multiplier classes ``K_w`` (as 1-based tuples), their sizes and
    the gcds ``g_w = gcd(k_1, .., k_w - 1, .., k_q)``."""

    blocks: Tuple[Tuple[int, ...], ...]
    kappas: Tuple[int, ...]
    gcds: Tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.blocks)

    @property
    def d(self) -> int:
        return sum(self.kappas)

    def block_of(self, index: int) -> int:
        """1-based block number containing the 1-based ``index``."""
        for w, block in enumerate(self.blocks, start=1):
            if index in block:
                return w
        raise KeyError(index)

    def group_order(self) -> int:
        from math import factorial

        out = 1
        for k in self.kappas:
            out *= factorial(k)
        return out

    def is_trivial(self) -> bool:
        return all(k == 1 for k in self.kappas)

    def refines(self, other: "SymmetryProfile") -> bool:
        """True when every class of ``self`` lies inside a class of ``other``,
        i.e. the family K(self) is contained in K(other)."""
        owner = {}
        for w, block in enumerate(other.blocks):
            for i in block:
                owner[i] = w
        return all(len({owner[i] for i in block}) == 1 for block in self.blocks)


@dataclass(frozen=True)
class StratumSignature:
    d: int
    zero_sum_family: Tuple[IndexSubset, ...]
    partitions: Tuple[ZeroSumPartition, ...]
    symmetry: SymmetryProfile
    # finer[j] lists (i, chi) with partitions[i] strictly finer than partitions[j]
    finer: Tuple[Tuple[Tuple[int, Tuple[int, ...]], ...], ...] = field(repr=False)

    def family_lists(self) -> List[List[int]]:
        return [list(s.members) for s in self.zero_sum_family]

    def maximal(self) -> List[ZeroSumPartition]:
        """Partitions with no strictly finer partition."""
        return [p for p, fin in zip(self.partitions, self.finer) if not fin]

    def precedes(self, i: int, j: int) -> bool:
        """``partitions[i] ≺ partitions[j]``: j refines i (reflexive)."""
        return i == j or any(k == j for k, _ in self.finer[i])


def _gaussian_integer_parts(values: Sequence[GaussianRational]):
    den = reduce(lcm, (v.re.denominator for v in values), 1)
    den = reduce(lcm, (v.im.denominator for v in values), den)
    re_parts = [int(v.re * den) for v in values]
    im_parts = [int(v.im * den) for v in values]
    return re_parts, im_parts


def zero_sum_masks(m: ResidueVector) -> List[int]:
    """Bit masks of all nonempty proper zero-sum subsets, ascending."""
    d = len(m)
    if d > MAX_DIRECT_D:
        raise ValueError(f"direct subset enumeration supports d <= {MAX_DIRECT_D}, got {d}")
    re_parts, im_parts = _gaussian_integer_parts(m.residues)
    bound = sum(abs(v) for v in re_parts) + sum(abs(v) for v in im_parts)
    if bound < 2**62 and kernels.BACKEND == "cython":
        return kernels.zero_sum_masks(re_parts, im_parts)
    from polyfiber import _pykernels

    return _pykernels.zero_sum_masks(re_parts, im_parts)


def zero_sum_subsets(m: ResidueVector) -> Tuple[IndexSubset, ...]:
    """The family I(lambda) as sorted 1-based index subsets.

    >>> [s.members for s in zero_sum_subsets(ResidueVector([1, 2, -1, -2]))]
    [(1, 3), (2, 4)]
    """
    return tuple(sorted(IndexSubset.from_mask(b) for b in zero_sum_masks(m)))


def _partitions_from_masks(masks: Iterable[int], d: int) -> List[Tuple[int, ...]]:
    full = (1 << d) - 1
    by_low: Dict[int, List[int]] = {}
    for b in masks:
        if b and b != full:
            by_low.setdefault(b & -b, []).append(b)
    out: List[Tuple[int, ...]] = []

    def extend(used: int, chosen: List[int]):
        if used == full:
            out.append(tuple(chosen))
            return
        free = full & ~used
        low = free & -free
        for b in by_low.get(low, ()):
            if not b & used:
                chosen.append(b)
                extend(used | b, chosen)
                chosen.pop()

    extend(0, [])
    out.sort(key=_partition_key)
    return out


def zero_sum_partitions(family: Iterable, d: int) -> List[ZeroSumPartition]:
    """All partitions of {1..d} into at least two blocks from ``family``.

    Each step picks a block containing the smallest unassigned index, so no
    partition with a non-zero-sum block is ever generated.
    """
    masks = [s if isinstance(s, int) else members_mask(s) for s in family]
    return [ZeroSumPartition(p) for p in _partitions_from_masks(masks, d)]


def refines(finer: ZeroSumPartition, coarser: ZeroSumPartition) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """Whether every block of ``finer`` sits inside a block of ``coarser``.

    When it does, also return ``chi``: for each block of ``coarser`` (in its
    canonical order) the number of ``finer`` blocks it contains.
    """
    chi = [0] * len(coarser.blocks)
    for b in finer.blocks:
        for u, c in enumerate(coarser.blocks):
            if b & c == b:
                chi[u] += 1
                break
        else:
            return False, None
    return True, tuple(chi)


def _group_equal(values: Sequence) -> Tuple[Tuple[int, ...], ...]:
    classes: Dict = {}
    for i, v in enumerate(values, start=1):
        classes.setdefault(v, []).append(i)
    return tuple(sorted(tuple(c) for c in classes.values()))


def symmetry_profile(s) -> SymmetryProfile:
    """Classes of equal multipliers.

    Accepts a :class:`SpectrumInput` or a :class:`ResidueVector`; equal
    residues are equal multipliers, so the scale of the residues is
    irrelevant here.
    """
    if isinstance(s, SpectrumInput):
        values = s.eigenvalues
    else:
        values = tuple(s)
    blocks = _group_equal(values)
    kappas = tuple(len(b) for b in blocks)
    gcds = []
    for w in range(len(kappas)):
        parts = [k - 1 if u == w else k for u, k in enumerate(kappas)]
        # gcd(a, 0) = a, and gcd of a single value is that value
        gcds.append(reduce(gcd, parts, 0))
    return SymmetryProfile(blocks, kappas, tuple(gcds))


def _refinement_table(partitions: Sequence[ZeroSumPartition]):
    finer = []
    for j, coarse in enumerate(partitions):
        row = []
        for i, fine in enumerate(partitions):
            if i == j or len(fine) <= len(coarse):
                continue
            ok, chi = refines(fine, coarse)
            if ok:
                row.append((i, chi))
        finer.append(tuple(row))
    return tuple(finer)


def stratum_signature(m: ResidueVector) -> StratumSignature:
    if isinstance(m, SpectrumInput):
        m = residues_from_eigenvalues(m)
    masks = zero_sum_masks(m)
    family = tuple(sorted(IndexSubset.from_mask(b) for b in masks))
    partitions = tuple(ZeroSumPartition(p) for p in _partitions_from_masks(masks, len(m)))
    return StratumSignature(
        d=len(m),
        zero_sum_family=family,
        partitions=partitions,
        symmetry=symmetry_profile(m),
        finer=_refinement_table(partitions),
    )
