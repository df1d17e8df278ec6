"""Compare the exact count with the numerical oracle for one spectrum."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import List, Optional

from polyfiber.combinatorics import symmetry_profile
from polyfiber.counting import FiberReport, fiber_count
from polyfiber.errors import CertificationFailure
from polyfiber.oracle.homotopy import SolveResult, SolverConfig, enumerate_solutions
from polyfiber.oracle.maps import reconstruct_map
from polyfiber.oracle.orbits import OrbitDecomposition, orbit_quotient
from polyfiber.spectrum import SpectrumInput, eigenvalues_from_residues

__all__ = ["Certification", "certify", "MULTIPLIER_TOL"]

MULTIPLIER_TOL = 1e-8


@dataclass
class Certification:
    report: FiberReport
    solve: Optional[SolveResult]
    orbits: Optional[OrbitDecomposition]
    verdict: str
    reasons: List[str]
    max_multiplier_residual: float
    max_index_sum: float
    scale_assumed: bool
    seconds: float
    retries: List[str] = field(default_factory=list)

    @property
    def exact_count(self) -> int:
        return self.report.count

    @property
    def point_count(self) -> int:
        return len(self.solve.solutions) if self.solve else -1

    @property
    def orbit_count(self) -> int:
        return len(self.orbits) if self.orbits is not None else -1

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "reasons": self.reasons,
            "exact_count": self.exact_count,
            "exact_points": self.report.s_d,
            "numeric_points": self.point_count,
            "orbit_count": self.orbit_count,
            "max_multiplier_residual": self.max_multiplier_residual,
            "max_index_sum": self.max_index_sum,
            "scale_assumed": self.scale_assumed,
            "retries": self.retries,
        }
        if self.solve is not None:
            out.update(
                {
                    "seed": self.solve.seed,
                    "gamma": [self.solve.gamma.real, self.solve.gamma.imag],
                    "paths": self.solve.n_paths,
                    "attempts": self.solve.attempts,
                    "escalated_paths": self.solve.escalated_paths,
                    "backend": self.solve.backend,
                    "endpoint_counts": self.solve.counts(),
                    "endpoints": [e.to_dict() for e in self.solve.endpoints],
                }
            )
        if self.orbits is not None:
            out["orbits"] = [o.to_dict() for o in self.orbits.orbits]
        return out


def certify(s, cfg: SolverConfig = SolverConfig()) -> Certification:
    """Exact count versus numeric enumeration, orbit quotient and rebuilt maps.

    ``s`` is a :class:`SpectrumInput` or a residue vector.  A residue vector
    is turned into multipliers through ``1 - 1/m``, i.e. taken at face scale;
    ``scale_assumed`` records this.  An orbit-matching failure triggers a new
    solve with the next seed (up to ``cfg.max_retries`` times); a solve that
    cannot be completed raises ``CertificationInconclusive``.
    """
    start = time.perf_counter()
    report = fiber_count(s)
    m = report.residues
    spectrum = s if isinstance(s, SpectrumInput) else eigenvalues_from_residues(m)
    scale_assumed = not isinstance(s, SpectrumInput)
    profile = symmetry_profile(m)
    retries = []
    for k in range(cfg.max_retries + 1):
        run_cfg = replace(cfg, seed=cfg.seed + k)
        solve = enumerate_solutions(m, run_cfg)
        try:
            orbits = orbit_quotient(solve.solutions, profile, cfg.tol_sep)
            maps = [reconstruct_map(p, spectrum) for p in solve.solutions]
        except CertificationFailure as exc:
            retries.append(f"seed {run_cfg.seed}: {exc}")
            continue
        break
    else:
        return Certification(
            report, solve, None, "FAIL", retries[-1:], float("inf"), float("inf"),
            scale_assumed, time.perf_counter() - start, retries,
        )
    res = max((r.multiplier_residual for r in maps), default=0.0)
    idx = max((abs(r.index_sum) for r in maps), default=0.0)
    reasons = []
    if len(solve.solutions) != report.s_d:
        reasons.append(f"numeric points {len(solve.solutions)} != exact {report.s_d}")
    if len(orbits) != report.count:
        reasons.append(f"orbits {len(orbits)} != exact count {report.count}")
    if res >= MULTIPLIER_TOL:
        reasons.append(f"multiplier residual {res:.3g} >= {MULTIPLIER_TOL}")
    if idx >= MULTIPLIER_TOL:
        reasons.append(f"index sum {idx:.3g} >= {MULTIPLIER_TOL}")
    for o in orbits.orbits:
        if o.stabilizer_order > 1:
            g = profile.gcds[o.zero_block - 1]
            if g % o.stabilizer_order or not o.cyclic:
                reasons.append(f"stabilizer of order {o.stabilizer_order} in class {o.zero_block} with g = {g}")
    if solve.anomalies:
        reasons.append(f"{len(solve.anomalies)} unexplained endpoint(s)")
    verdict = "PASS" if not reasons else "FAIL"
    return Certification(
        report, solve, orbits, verdict, reasons, res, idx, scale_assumed, time.perf_counter() - start, retries
    )
