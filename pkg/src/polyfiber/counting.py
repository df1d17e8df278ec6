"""Exact count of the conjugacy classes with a prescribed multiplier spectrum.

Pipeline, for residues ``m`` with signature (I, K):

1. multiplicities ``e_P`` of the coincidence components, one per zero-sum
   partition ``P``, by the top-down recursion over strictly finer partitions;
2. ``s_d = (d-2)! - sum_P e_P * (d-2)(d-3)...(d-#P+1)``, the number of
   normalized fixed-point configurations;
3. orbit counts ``c_{w,t}`` of configurations whose stabilizer under the
   permutations of equal multipliers is cyclic of order ``t`` with centre in
   class ``w``, from the divisor systems built on the scaled spectra
   ``m[t]``, and ``c_1`` for the free orbits;
4. the fiber cardinality ``c_1 + sum c_{w,t}``.

Everything is computed in exact integer / rational arithmetic.  Integrality
and non-negativity are checked, never assumed; a violation raises
:class:`~polyfiber.errors.ConsistencyError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import factorial, gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from polyfiber.combinatorics import (
    StratumSignature,
    SymmetryProfile,
    ZeroSumPartition,
    mask_members,
    stratum_signature,
    symmetry_profile,
)
from polyfiber.errors import ConsistencyError, DomainError, InvalidSpectrumError
from polyfiber.exact import GaussianRational, gr_format
from polyfiber.spectrum import ResidueVector, SpectrumInput, residues_from_eigenvalues

__all__ = [
    "falling",
    "multiplicity_table",
    "multiplicity_recursive",
    "multiplicity_product",
    "point_count",
    "budget_identity",
    "ScaledSpectrum",
    "scaled_spectrum",
    "OrbitCountTable",
    "orbit_counts",
    "FiberReport",
    "fiber_count",
    "integer_ratio_vector",
    "emptiness_by_integer_ratio",
]


def falling(n: int, j: int) -> int:
    """``n (n-1) ... (n-j+1)``; the empty product is 1."""
    out = 1
    for k in range(n - j + 1, n + 1):
        out *= k
    return out


def _as_residues(s) -> ResidueVector:
    if isinstance(s, ResidueVector):
        return s
    if isinstance(s, SpectrumInput):
        return residues_from_eigenvalues(s)
    return ResidueVector(s)


# -- multiplicities -------------------------------------------------------

def multiplicity_table(sig: StratumSignature) -> Tuple[int, ...]:
    """``e_P`` for every partition of ``sig``, aligned with ``sig.partitions``.

    Finer partitions are resolved first, so every term of the recursion is
    available when needed.
    """
    parts = sig.partitions
    e: Dict[int, int] = {}
    order = sorted(range(len(parts)), key=lambda i: -len(parts[i]))
    for j in order:
        sizes = parts[j].block_sizes()
        value = 1
        for n in sizes:
            value *= factorial(n - 1)
        for i, chi in sig.finer[j]:
            weight = 1
            for n, c in zip(sizes, chi):
                weight *= falling(n - 1, c - 1)
            value -= e[i] * weight
        if value < 0:
            raise ConsistencyError(
                f"negative multiplicity {value} for {parts[j]!r}",
                ledger={"partition": parts[j].as_lists(), "e": value},
            )
        e[j] = value
    return tuple(e[j] for j in range(len(parts)))


def multiplicity_recursive(partition: ZeroSumPartition, sig: StratumSignature) -> int:
    try:
        j = sig.partitions.index(partition)
    except ValueError:
        raise DomainError(f"{partition!r} is not a zero-sum partition of this spectrum") from None
    return multiplicity_table(sig)[j]


def _point_count_from(sig: StratumSignature, e: Sequence[int]) -> int:
    d = sig.d
    s = factorial(d - 2)
    for p, ep in zip(sig.partitions, e):
        s -= ep * falling(d - 2, len(p) - 2)
    return s


def _canonical_key(residues: Sequence[GaussianRational]) -> Tuple[GaussianRational, ...]:
    """Representative of the residues up to permutation and common scale."""
    best = None
    for pivot in residues:
        cand = tuple(sorted((v / pivot for v in residues), key=GaussianRational.sort_key))
        key = tuple(v.sort_key() for v in cand)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


@lru_cache(maxsize=4096)
def _point_count_cached(key: Tuple[GaussianRational, ...]) -> int:
    m = ResidueVector(key, scaled=False)
    sig = stratum_signature(m)
    s = _point_count_from(sig, multiplicity_table(sig))
    if s < 0:
        raise ConsistencyError(
            f"negative point count {s}", ledger={"residues": [gr_format(v) for v in key]}
        )
    return s


def point_count(m) -> int:
    """``s_d``: number of normalized configurations, at most ``(d-2)!``.

    Depends only on the ratio class and is symmetric in the entries, so the
    result is memoized on a canonical representative.
    """
    m = _as_residues(m)
    if len(m) < 2:
        raise DomainError("point count needs at least two residues")
    return _point_count_cached(_canonical_key(m.residues))


def multiplicity_product(partition: ZeroSumPartition, m) -> int:
    """``prod_u (#I_u - 1) * s_{#I_u}(m restricted to I_u)``.

    Independent of :func:`multiplicity_table`: it never looks at the
    refinement order, only at the restricted sub-spectra.
    """
    m = _as_residues(m)
    out = 1
    for block in partition.blocks:
        idx = [i - 1 for i in mask_members(block)]
        n = len(idx)
        s = 1 if n <= 3 else point_count(m.restrict(idx))
        out *= (n - 1) * s
    return out


def budget_identity(sig: StratumSignature, e: Sequence[int], s: int) -> Tuple[int, int]:
    """Both sides of ``(d-1)! = sum_{P in I'} e_P (d-1)...(d-#P+1)``.

    ``I'`` adds the one-block partition with ``e = (d-1) s``.
    """
    d = sig.d
    rhs = (d - 1) * s
    for p, ep in zip(sig.partitions, e):
        rhs += ep * falling(d - 1, len(p) - 1)
    return factorial(d - 1), rhs


# -- symmetry reduction ---------------------------------------------------

@dataclass(frozen=True)
class ScaledSpectrum:
    w: int
    t: int
    d_t: int
    residues: ResidueVector


def _divisors(n: int) -> List[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def scaled_spectrum(m, profile: SymmetryProfile, w: int, t: int) -> ScaledSpectrum:
    """Residues of ``lam[t]`` for class ``w`` (1-based) and ``t | g_w``, ``t >= 2``.

    Class by class ``t*m_u`` repeated ``k_u/t`` times (``(k_w - 1)/t`` for
    class ``w``), followed by one unscaled ``m_w``.
    """
    m = _as_residues(m)
    if not 1 <= w <= profile.q:
        raise DomainError(f"no symmetry class {w}")
    g = profile.gcds[w - 1]
    if t < 2 or g % t:
        raise DomainError(f"t={t} is not a divisor >= 2 of g_{w}={g}")
    out = []
    for u, (block, kappa) in enumerate(zip(profile.blocks, profile.kappas), start=1):
        value = m[block[0] - 1]
        copies = (kappa - 1) // t if u == w else kappa // t
        out.extend([value * t] * copies)
    out.append(m[profile.blocks[w - 1][0] - 1])
    d = len(m)
    d_t = (d - 1) // t + 1
    assert len(out) == d_t
    return ScaledSpectrum(w, t, d_t, ResidueVector(out, scaled=m.scaled))


@dataclass(frozen=True)
class OrbitCountTable:
    c1: int
    higher: Dict[Tuple[int, int], int]
    # right-hand sides of the divisor systems and the scaled point counts
    rhs: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    scaled: Dict[Tuple[int, int], Tuple[ScaledSpectrum, int]] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.c1 + sum(self.higher.values())

    def rows(self) -> List[Dict[str, int]]:
        return [{"w": w, "t": t, "c": c} for (w, t), c in sorted(self.higher.items())]


def _as_count(value: Fraction, what: str, ledger) -> int:
    if value.denominator != 1 or value < 0:
        raise ConsistencyError(f"{what} = {value} is not a non-negative integer", ledger=ledger)
    return int(value)


def orbit_counts(m, profile: Optional[SymmetryProfile] = None, s_d: Optional[int] = None) -> OrbitCountTable:
    """Solve the divisor systems for ``c_{w,t}`` and then ``c_1``.

    For each class ``w`` the unknowns ``c_{w,b}`` (``b | g_w``, ``b >= 2``)
    are found from the largest divisor down:
    ``sum_{t | b | g_w} (t/b) c_{w,b} = s(m[t]) / prod (k_u/t)!``.
    """
    m = _as_residues(m)
    profile = profile or symmetry_profile(m)
    if s_d is None:
        s_d = point_count(m)
    higher: Dict[Tuple[int, int], Fraction] = {}
    rhs: Dict[Tuple[int, int], Fraction] = {}
    scaled: Dict[Tuple[int, int], Tuple[ScaledSpectrum, int]] = {}

    def ledger():
        return {
            "s_d": s_d,
            "rhs": {f"{w},{t}": str(v) for (w, t), v in rhs.items()},
            "c": {f"{w},{t}": str(v) for (w, t), v in higher.items()},
        }

    for w in range(1, profile.q + 1):
        g = profile.gcds[w - 1]
        divs = [t for t in _divisors(g) if t >= 2]
        for t in sorted(divs, reverse=True):
            sc = scaled_spectrum(m, profile, w, t)
            s_t = point_count(sc.residues)
            denom = 1
            for u, kappa in enumerate(profile.kappas, start=1):
                denom *= factorial((kappa - 1) // t if u == w else kappa // t)
            value = Fraction(s_t, denom)
            rhs[(w, t)] = value
            scaled[(w, t)] = (sc, s_t)
            for b in divs:
                if b > t and b % t == 0:
                    value -= Fraction(t, b) * higher[(w, b)]
            higher[(w, t)] = value
            _as_count(value, f"c[w={w},t={t}]", ledger())
    c1 = Fraction(s_d, profile.group_order())
    for (w, t), c in higher.items():
        c1 -= c / t
    c1_int = _as_count(c1, "c_1", {**ledger(), "c1": str(c1)})
    return OrbitCountTable(
        c1=c1_int,
        higher={k: int(v) for k, v in higher.items()},
        rhs=rhs,
        scaled=scaled,
    )


# -- emptiness shortcut ---------------------------------------------------

def integer_ratio_vector(m) -> Optional[Tuple[int, ...]]:
    """Primitive integer vector proportional to ``m`` (first entry positive),
    or None when some ratio ``m_i/m_1`` is not a real rational."""
    m = _as_residues(m)
    ratios = [v / m[0] for v in m]
    if any(r.im for r in ratios):
        return None
    den = reduce(lcm, (r.re.denominator for r in ratios), 1)
    ints = [int(r.re * den) for r in ratios]
    g = reduce(gcd, ints, 0)
    return tuple(v // g for v in ints)


def emptiness_by_integer_ratio(m) -> Optional[Tuple[int, ...]]:
    """Witness that the fiber is empty: the primitive integer vector ``c``
    proportional to ``m`` when ``sum |c_i| <= 2(d-2)``; None is inconclusive."""
    m = _as_residues(m)
    c = integer_ratio_vector(m)
    if c is None or sum(abs(v) for v in c) > 2 * (len(m) - 2):
        return None
    return c


# -- end to end -----------------------------------------------------------

@dataclass
class FiberReport:
    residues: ResidueVector
    eigenvalues: Optional[SpectrumInput]
    signature: StratumSignature
    e_table: Tuple[int, ...]
    e_product: Tuple[int, ...]
    s_d: int
    orbits: OrbitCountTable
    count: int
    empty_witness: Optional[Tuple[int, ...]]
    budget: Tuple[int, int]
    sub_spectra: List[Tuple[str, ResidueVector, int]] = field(default_factory=list)

    @property
    def d(self) -> int:
        return self.signature.d

    def ledger(self) -> dict:
        """Counting data with the residue values stripped, for comparing
        spectra from the same stratum."""
        sig = self.signature
        return {
            "I": sig.family_lists(),
            "K": [list(b) for b in sig.symmetry.blocks],
            "partitions": [p.as_lists() for p in sig.partitions],
            "e": list(self.e_table),
            "s_d": self.s_d,
            "s_scaled": {f"{w},{t}": s for (w, t), (_, s) in sorted(self.orbits.scaled.items())},
            "c": self.orbits.rows(),
            "c1": self.orbits.c1,
            "count": self.count,
        }

    def to_dict(self) -> dict:
        sig = self.signature
        s_values = [{"role": "main", "d": self.d, "residues": self.residues.to_strings(), "s": self.s_d}]
        for (w, t), (sc, s) in sorted(self.orbits.scaled.items()):
            s_values.append(
                {"role": "scaled", "w": w, "t": t, "d": sc.d_t, "residues": sc.residues.to_strings(), "s": s}
            )
        for role, sub, s in self.sub_spectra:
            s_values.append({"role": role, "d": len(sub), "residues": sub.to_strings(), "s": s})
        out = {
            "d": self.d,
            "residues": self.residues.to_strings(),
        }
        if self.eigenvalues is not None:
            out["eigenvalues"] = self.eigenvalues.to_strings()
        out.update(
            {
                "signature": {
                    "I": sig.family_lists(),
                    "K": [list(b) for b in sig.symmetry.blocks],
                    "kappa": list(sig.symmetry.kappas),
                    "g": list(sig.symmetry.gcds),
                    "partitions": [p.as_lists() for p in sig.partitions],
                    "maximal": [p.as_lists() for p in sig.maximal()],
                },
                "e_table": [
                    {"partition": p.as_lists(), "e": e, "e_product": ep}
                    for p, e, ep in zip(sig.partitions, self.e_table, self.e_product)
                ],
                "s_values": s_values,
                "c_table": self.orbits.rows(),
                "c1": self.orbits.c1,
                "count": self.count,
                "budget_identity": {"lhs": self.budget[0], "rhs": self.budget[1]},
                "empty_witness": list(self.empty_witness) if self.empty_witness else None,
            }
        )
        return out


def fiber_count(s) -> FiberReport:
    """Run the whole count for a spectrum (or residue vector) with ``d >= 4``.

    Cross-checks performed on the way, each raising ConsistencyError:
    the recursive and product multiplicities agree, the degree budget
    balances, every orbit count is a non-negative integer and the total lies
    in ``[0, (d-2)!]``.
    """
    eigenvalues = s if isinstance(s, SpectrumInput) else None
    m = _as_residues(s)
    d = len(m)
    if d < 4:
        raise InvalidSpectrumError(f"degree must be at least 4, got {d}")
    sig = stratum_signature(m)
    e = multiplicity_table(sig)
    s_d = _point_count_from(sig, e)
    if s_d < 0:
        raise ConsistencyError(f"negative point count {s_d}", ledger={"e": list(e)})
    e_prod = tuple(multiplicity_product(p, m) for p in sig.partitions)
    if e_prod != e:
        raise ConsistencyError(
            "recursive and product multiplicities disagree",
            ledger={"e": list(e), "e_product": list(e_prod)},
        )
    budget = budget_identity(sig, e, s_d)
    if budget[0] != budget[1]:
        raise ConsistencyError(f"degree budget does not balance: {budget}", ledger={"e": list(e), "s_d": s_d})
    orbits = orbit_counts(m, sig.symmetry, s_d)
    count = orbits.total
    if not 0 <= count <= factorial(d - 2):
        raise ConsistencyError(f"count {count} outside [0, (d-2)!]", ledger={"count": count})
    subs = []
    seen = set()
    for p in sig.partitions:
        for block in p.blocks:
            if block in seen or bin(block).count("1") <= 3:
                continue
            seen.add(block)
            idx = [i - 1 for i in mask_members(block)]
            sub = m.restrict(idx)
            subs.append((f"block {list(mask_members(block))}", sub, point_count(sub)))
    return FiberReport(
        residues=m,
        eigenvalues=eigenvalues,
        signature=sig,
        e_table=e,
        e_product=e_prod,
        s_d=s_d,
        orbits=orbits,
        count=count,
        empty_witness=emptiness_by_integer_ratio(m),
        budget=budget,
        sub_spectra=subs,
    )
