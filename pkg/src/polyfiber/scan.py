"""Searches over integer residue vectors and over strata.

``run_scan`` tabulates the fiber count of primitive zero-sum integer
vectors and checks the emptiness criterion ``sum |c_i| <= 2(d-2)`` against
the full count.  ``stratum_perturbations`` re-draws a spectrum inside its
(I, K) stratum, and ``breaking_perturbations`` leaves the stratum by
dropping zero-sum relations.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple

from polyfiber.combinatorics import symmetry_profile, zero_sum_masks
from polyfiber.counting import fiber_count
from polyfiber.errors import ConsistencyError, DomainError
from polyfiber.exact import GaussianRational
from polyfiber.sampling import random_gaussian_rational
from polyfiber.spectrum import ResidueVector

__all__ = [
    "ScanRow",
    "ScanReport",
    "primitive_zero_sum_vectors",
    "run_scan",
    "nullspace",
    "stratum_perturbations",
    "breaking_perturbations",
    "StratumCheck",
    "check_stratum",
]


# -- integer vectors ------------------------------------------------------

def _canonical_sign(v: Tuple[int, ...]) -> Tuple[int, ...]:
    neg = tuple(sorted(-x for x in v))
    return min(v, neg)


def primitive_zero_sum_vectors(d: int, bound: int, max_l1: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Sorted nonzero integer vectors of length ``d`` with entries in
    ``[-bound, bound]``, zero sum, gcd 1, one representative per sign class.

    The count depends only on the multiset of residues up to a common
    factor, so this covers every such residue vector up to permutation.
    """
    values = [v for v in range(-bound, bound + 1) if v]
    for combo in itertools.combinations_with_replacement(values, d):
        if sum(combo) or reduce(gcd, combo, 0) != 1:
            continue
        if max_l1 is not None and sum(map(abs, combo)) > max_l1:
            continue
        if _canonical_sign(combo) != combo:
            continue
        yield combo


@dataclass
class ScanRow:
    vector: Tuple[int, ...]
    l1: int
    count: int
    shortcut: bool

    def to_dict(self) -> dict:
        return {"c": list(self.vector), "l1": self.l1, "count": self.count, "shortcut_empty": self.shortcut}


@dataclass
class ScanReport:
    d: int
    bound: int
    mode: str
    rows: List[ScanRow] = field(default_factory=list)
    soundness_violations: List[ScanRow] = field(default_factory=list)
    converse_violations: List[ScanRow] = field(default_factory=list)
    conjecture_candidates: List[ScanRow] = field(default_factory=list)
    consistency_faults: List[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not (self.soundness_violations or self.converse_violations or self.consistency_faults)

    def table(self) -> List[dict]:
        """Counts grouped by ``sum |c|``: how many vectors, how many empty."""
        out = {}
        for r in self.rows:
            entry = out.setdefault(r.l1, {"l1": r.l1, "vectors": 0, "empty": 0})
            entry["vectors"] += 1
            entry["empty"] += r.count == 0
        return [out[k] for k in sorted(out)]

    def to_dict(self, include_rows: bool = False) -> dict:
        out = {
            "d": self.d,
            "bound": self.bound,
            "mode": self.mode,
            "threshold": 2 * (self.d - 2),
            "vectors": len(self.rows),
            "table": self.table(),
            "soundness_violations": [r.to_dict() for r in self.soundness_violations],
            "converse_checked": self.d <= 7,
            "converse_violations": [r.to_dict() for r in self.converse_violations],
            "conjecture_candidates": [r.to_dict() for r in self.conjecture_candidates],
            "consistency_faults": self.consistency_faults,
            "ok": self.ok,
        }
        if include_rows:
            out["rows"] = [r.to_dict() for r in self.rows]
        return out


def _sampled_vectors(d: int, bound: int, samples: int, rng: random.Random) -> Iterator[Tuple[int, ...]]:
    values = [v for v in range(-bound, bound + 1) if v]
    seen = set()
    attempts = 0
    while len(seen) < samples and attempts < 200 * samples:
        attempts += 1
        body = [rng.choice(values) for _ in range(d - 1)]
        last = -sum(body)
        if not last or abs(last) > bound:
            continue
        v = tuple(sorted(body + [last]))
        g = reduce(gcd, v, 0)
        v = _canonical_sign(tuple(sorted(x // g for x in v)))
        if v not in seen:
            seen.add(v)
            yield v


def run_scan(d: int, bound: int, exhaustive: bool = True, samples: int = 200, seed: int = 0) -> ScanReport:
    """Count every (or a random sample of) primitive zero-sum vector.

    Checked on each row: a vector with ``sum |c| <= 2(d-2)`` has count 0.
    For ``d <= 7`` also: count 0 implies ``sum |c| <= 2(d-2)`` (the primitive
    vector is the only integer vector proportional to ``c`` up to sign and
    multiples, so no smaller proportional vector can exist).  For ``d >= 8``
    such rows are only collected as candidates.
    """
    if d < 4:
        raise DomainError("scan needs d >= 4")
    start = time.perf_counter()
    threshold = 2 * (d - 2)
    if exhaustive:
        vectors = primitive_zero_sum_vectors(d, bound)
        mode = "exhaustive"
    else:
        vectors = _sampled_vectors(d, bound, samples, random.Random(seed))
        mode = f"sampled(seed={seed})"
    report = ScanReport(d, bound, mode)
    for v in vectors:
        try:
            rep = fiber_count(ResidueVector(v))
        except ConsistencyError as exc:
            report.consistency_faults.append({"c": list(v), "error": str(exc), "ledger": exc.ledger})
            continue
        l1 = sum(map(abs, v))
        row = ScanRow(v, l1, rep.count, rep.empty_witness is not None)
        report.rows.append(row)
        if l1 <= threshold and rep.count != 0:
            report.soundness_violations.append(row)
        if l1 > threshold and rep.count == 0:
            (report.converse_violations if d <= 7 else report.conjecture_candidates).append(row)
    report.seconds = time.perf_counter() - start
    return report


# -- strata ---------------------------------------------------------------

def nullspace(rows: Sequence[Sequence[int]], n: int) -> List[List[Fraction]]:
    """Basis of ``{x in Q^n : rows . x = 0}`` by exact row reduction."""
    a = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(a)) if a[i][col]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][col]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -a[i][f]
        basis.append(x)
    return basis


def _constraint_rows(d: int, masks: Sequence[int], blocks: Sequence[Sequence[int]]) -> List[List[int]]:
    rows = [[1] * d]
    for b in masks:
        rows.append([1 if b >> i & 1 else 0 for i in range(d)])
    for block in blocks:
        for i, j in zip(block, block[1:]):
            row = [0] * d
            row[i - 1], row[j - 1] = 1, -1
            rows.append(row)
    return rows


def _random_point(basis, rng: random.Random) -> Optional[ResidueVector]:
    d = len(basis[0])
    coeffs = [random_gaussian_rational(rng, num=7, den=4) for _ in basis]
    values = [sum((c * b[i] for c, b in zip(coeffs, basis)), GaussianRational(0)) for i in range(d)]
    if any(v.is_zero() for v in values):
        return None
    return ResidueVector(values)


def _signature_key(m: ResidueVector):
    return frozenset(zero_sum_masks(m)), symmetry_profile(m).blocks


def stratum_perturbations(m: ResidueVector, k: int, rng: random.Random, max_tries: int = 1000) -> List[ResidueVector]:
    """``k`` random residue vectors with the same (I, K) as ``m``.

    Draws from the linear space cut out by the zero-sum relations of ``m``,
    the equalities inside each class and the total sum, rejecting draws that
    pick up extra relations.
    """
    d = len(m)
    key = _signature_key(m)
    basis = nullspace(_constraint_rows(d, sorted(key[0]), key[1]), d)
    out = []
    for _ in range(max_tries):
        if len(out) == k:
            break
        p = _random_point(basis, rng)
        if p is not None and _signature_key(p) == key:
            out.append(p)
    if len(out) < k:
        raise DomainError(f"only {len(out)} of {k} stratum perturbations found")
    return out


def breaking_perturbations(m: ResidueVector, k: int, rng: random.Random, max_tries: int = 1000) -> List[ResidueVector]:
    """Up to ``k`` vectors ``m'`` with I(m') a proper subfamily of I(m) and
    every class of m' inside a class of m.

    Each draw keeps a random subset of the zero-sum relations (always
    dropping at least one complementary pair) and the class equalities.
    """
    d = len(m)
    family, blocks = _signature_key(m)
    if not family:
        return []
    full = (1 << d) - 1
    pairs = sorted({min(b, full ^ b) for b in family})
    prof = symmetry_profile(m)
    out = []
    for _ in range(max_tries):
        if len(out) == k:
            break
        drop = set(rng.sample(pairs, rng.randint(1, len(pairs))))
        kept = [b for b in pairs if b not in drop]
        keep_classes = rng.random() < 0.5
        basis = nullspace(_constraint_rows(d, kept, blocks if keep_classes else ()), d)
        p = _random_point(basis, rng)
        if p is None:
            continue
        fam_p, _ = _signature_key(p)
        if fam_p < family and symmetry_profile(p).refines(prof):
            out.append(p)
    return out


@dataclass
class StratumCheck:
    base: ResidueVector
    preserved: int
    mismatches: List[dict]
    broken: int
    decreases: List[dict]

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.decreases

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_strings(),
            "preserving_perturbations": self.preserved,
            "ledger_mismatches": self.mismatches,
            "breaking_perturbations": self.broken,
            "count_decreases": self.decreases,
            "ok": self.ok,
        }


def check_stratum(m: ResidueVector, k: int, rng: random.Random) -> StratumCheck:
    """Perturb ``m`` inside its stratum (ledgers must be identical) and out of
    it by dropping relations (counts must not go down)."""
    base = fiber_count(m)
    ledger = base.ledger()
    mismatches = []
    for p in stratum_perturbations(m, k, rng):
        other = fiber_count(p).ledger()
        if other != ledger:
            mismatches.append({"residues": p.to_strings(), "ledger": other})
    decreases = []
    broken = breaking_perturbations(m, k, rng)
    for p in broken:
        c = fiber_count(p).count
        if c < base.count:
            decreases.append({"residues": p.to_strings(), "count": c, "base_count": base.count})
    return StratumCheck(m, k, mismatches, len(broken), decreases)
