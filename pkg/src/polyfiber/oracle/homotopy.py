"""Numerical enumeration of normalized fixed-point configurations.

Solves ``phi_k(z) = sum_{i<d} m_i z_i^k = 0`` (``k = 1..d-2``) for
``z_1..z_{d-1}`` in projective space (``z_d = 0``) with a total-degree
homotopy in homogeneous coordinates on a random affine patch, then sorts
every endpoint into

* ``S``: a regular solution with all of ``z_1..z_{d-1}, 0`` distinct; these
  are the configurations being counted,
* ``B``: a solution on a coincidence locus whose pattern of equal
  coordinates is a zero-sum partition,
* ``divergent`` / ``anomaly``: anything else (reported, never dropped).

No exact count is consulted anywhere in this module.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from polyfiber import kernels
from polyfiber.combinatorics import mask_members, zero_sum_masks
from polyfiber.errors import CertificationInconclusive, DomainError
from polyfiber.exact import gr_to_float
from polyfiber.spectrum import ResidueVector

__all__ = ["SolverConfig", "NumericSolution", "SolveResult", "enumerate_solutions", "chart_residual"]


ENDGAME_T = 1e-4


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    tol_track: float = 1e-10
    tol_res: float = 1e-9
    tol_sep: float = 1e-6
    precision: int = 53
    escalation_precision: int = 128
    max_retries: int = 3
    path_budget: int = 720

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class NumericSolution:
    chart_point: Tuple[complex, ...]
    residual: float
    separation: float
    classification: str
    path: int = -1
    status: str = ""
    condition: float = math.inf
    pattern: Optional[List[List[int]]] = None
    newton_contraction: Optional[float] = None

    def full_point(self) -> np.ndarray:
        """``(z_1, .., z_{d-2}, 1, 0)``."""
        return np.array(list(self.chart_point) + [1.0, 0.0], dtype=complex)

    def to_dict(self) -> dict:
        out = {
            "path": self.path,
            "status": self.status,
            "classification": self.classification,
            "residual": self.residual,
            "separation": self.separation,
            "condition": self.condition if math.isfinite(self.condition) else None,
        }
        if self.classification == "S":
            out["chart_point"] = [[z.real, z.imag] for z in self.chart_point]
        if self.pattern is not None:
            out["pattern"] = self.pattern
        return out


@dataclass
class SolveResult:
    solutions: List[NumericSolution]
    endpoints: List[NumericSolution]
    n_paths: int
    attempts: int
    gamma: complex
    seed: int
    backend: str
    escalated_paths: int = 0
    attempt_log: List[str] = field(default_factory=list)

    @property
    def anomalies(self) -> List[NumericSolution]:
        return [e for e in self.endpoints if e.classification == "anomaly"]

    def counts(self) -> dict:
        out = {"S": 0, "B": 0, "divergent": 0, "anomaly": 0}
        for e in self.endpoints:
            out[e.classification] += 1
        return out


def _float_residues(m: ResidueVector) -> np.ndarray:
    values = np.array([gr_to_float(v) for v in m.residues], dtype=complex)
    return values / np.max(np.abs(values))


def _start_points(n: int, patch: Sequence[complex]):
    """Solutions of ``x_k^k = x_n^k`` (k < n) on the patch ``p.x = 1``."""
    roots = [[cmath.exp(2j * math.pi * j / k) for j in range(k)] for k in range(1, n)]
    for combo in itertools.product(*roots):
        x = list(combo) + [1.0 + 0j]
        s = sum(p * v for p, v in zip(patch, x))
        yield [v / s for v in x]


def chart_residual(m: np.ndarray, y: np.ndarray) -> float:
    """``max_k |phi_k| / sum_i |m_i z_i^k|`` on the chart ``z_{d-1} = 1``.

    The normalization makes the value comparable across scales of ``z``.
    """
    n = len(y)
    z = np.append(y, 1.0)
    mm = m[: n + 1]
    worst = 0.0
    for k in range(1, n + 1):
        terms = mm * z**k
        worst = max(worst, abs(terms.sum()) / max(np.abs(terms).sum(), 1e-300))
    return worst


def _chart_system(m: np.ndarray, y: np.ndarray):
    n = len(y)
    z = np.append(y, 1.0)
    mm = m[: n + 1]
    f = np.array([np.sum(mm * z**k) for k in range(1, n + 1)])
    jac = np.array([[k * mm[i] * y[i] ** (k - 1) for i in range(n)] for k in range(1, n + 1)])
    return f, jac


def _polish(m: np.ndarray, y: np.ndarray, iters: int = 8):
    """Newton on the chart system.  Refuses (returns None) if any step is
    large, so a singular endpoint is never dragged onto a nearby solution."""
    y = y.copy()
    sizes = []
    for _ in range(iters):
        f, jac = _chart_system(m, y)
        try:
            dy = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None, sizes
        size = np.max(np.abs(dy))
        if size > 1e-6 * (1 + np.max(np.abs(y))):
            return None, sizes
        y = y + dy
        sizes.append(size)
        if size <= 1e-15 * (1 + np.max(np.abs(y))):
            break
    return y, sizes


def _separation(full: np.ndarray) -> float:
    scale = np.max(np.abs(full))
    diffs = np.abs(full[:, None] - full[None, :])
    iu = np.triu_indices(len(full), 1)
    return float(np.min(diffs[iu]) / scale)


def _merge_levels(v: np.ndarray):
    """Single-linkage merge sequence of the coordinates: yields
    ``(height, next_height, blocks)`` from the finest clustering up, where
    ``blocks`` are 0-based bit masks."""
    d = len(v)
    edges = sorted(
        (abs(v[i] - v[j]), i, j) for i in range(d) for j in range(i + 1, d)
    )
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    heights = []
    snapshots = []
    for dist, i, j in edges:
        a, b = find(i), find(j)
        if a == b:
            continue
        parent[a] = b
        groups = {}
        for k in range(d):
            groups[find(k)] = groups.get(find(k), 0) | (1 << k)
        heights.append(dist)
        snapshots.append(sorted(groups.values(), key=lambda blk: blk & -blk))
    for k, blocks in enumerate(snapshots):
        nxt = heights[k + 1] if k + 1 < len(heights) else math.inf
        yield heights[k], nxt, blocks


def _coincidence_pattern(x: Sequence[complex], family: set, tol0: float, gap: float = 10.0):
    """Match a homogeneous endpoint to a zero-sum coincidence pattern.

    Singular endpoints converge slowly, so coordinates meant to coincide may
    still be visibly apart.  Among the single-linkage clusterings of the
    coordinates (including the fixed 0), the finest one is accepted whose
    blocks are all zero-sum and whose clusters are either tight (within
    ``tol0``) or separated from the next merge by a factor ``gap``.
    """
    v = np.array(list(x) + [0.0], dtype=complex)
    v = v / np.max(np.abs(v))
    for height, nxt, blocks in _merge_levels(v):
        if len(blocks) < 2:
            break
        if not all(b in family for b in blocks):
            continue
        if height <= tol0 or nxt >= gap * height:
            return [list(mask_members(b)) for b in blocks]
    return None


def _classify(i, x, t, status, m_float, family, cfg) -> NumericSolution:
    name = kernels.STATUS_NAMES[status]
    x = np.array([complex(v) for v in x])
    if status == kernels.DIVERGED:
        return NumericSolution((), math.inf, 0.0, "divergent", i, name)
    norm = np.max(np.abs(x))
    if status == kernels.SUCCESS and abs(x[-1]) > cfg.tol_sep * norm:
        y0 = x[:-1] / x[-1]
        y, sizes = _polish(m_float, y0)
        if y is not None:
            full = np.concatenate([y, [1.0, 0.0]])
            res = chart_residual(m_float, y)
            sep = _separation(full)
            if res < cfg.tol_res and sep > cfg.tol_sep:
                _, jac = _chart_system(m_float, y)
                cond = float(np.linalg.cond(jac))
                contraction = None
                if len(sizes) >= 2 and sizes[-2] > 0:
                    contraction = float(sizes[-1] / sizes[-2] ** 2) if sizes[-2] ** 2 > 0 else None
                return NumericSolution(
                    tuple(complex(v) for v in y), res, sep, "S", i, name, cond, None, contraction
                )
    pattern = _coincidence_pattern(x, family, cfg.tol_sep)
    y = x[:-1] / x[-1] if abs(x[-1]) > 0 else x[:-1]
    sep = _separation(np.concatenate([x, [0.0]]))
    res = chart_residual(m_float, y) if abs(x[-1]) > 0 else math.inf
    if pattern is not None:
        return NumericSolution((), res, sep, "B", i, name, pattern=pattern)
    return NumericSolution(tuple(complex(v) for v in y), res, sep, "anomaly", i, name)


def _track_mp(m_float, patch, gamma, start, cfg, t0=1.0):
    with mpmath.workprec(cfg.escalation_precision if cfg.precision <= 53 else cfg.precision):
        mc = [mpmath.mpc(v) for v in m_float]
        pc = [mpmath.mpc(v) for v in patch]
        g = mpmath.mpc(gamma)
        st = [mpmath.mpc(v) for v in start]
        tol = min(cfg.tol_track, 1e-20)
        x, t, status, steps = kernels.track_path_generic(
            mc, pc, g, st, tol=tol, h_min=1e-30, t_near=1e-12, t0=mpmath.mpf(t0)
        )
        return [complex(v) for v in x], float(t), status, steps


def _duplicates(points: List[NumericSolution], tol: float) -> bool:
    for a, b in itertools.combinations(points, 2):
        pa = np.array(a.chart_point)
        pb = np.array(b.chart_point)
        scale = 1 + max(np.max(np.abs(pa)), np.max(np.abs(pb)))
        if np.max(np.abs(pa - pb)) <= tol * scale:
            return True
    return False


def _canonical_order(sol: NumericSolution):
    return tuple(round(c, 9) for z in sol.chart_point for c in (z.real, z.imag))


def enumerate_solutions(m: ResidueVector, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Track all ``(d-2)!`` paths and classify the endpoints.

    A run is accepted only when no path failed outright (after an
    extended-precision retry) and no two paths reached the same regular
    solution; otherwise a new random constant is drawn, up to
    ``cfg.max_retries`` times, before giving up with
    :class:`CertificationInconclusive`.
    """
    d = len(m)
    if d < 4:
        raise DomainError("the oracle needs d >= 4")
    n_paths = math.factorial(d - 2)
    if n_paths > cfg.path_budget:
        raise DomainError(f"(d-2)! = {n_paths} paths exceeds the budget of {cfg.path_budget}")
    m_float = _float_residues(m)
    family = set(zero_sum_masks(m))
    n = d - 1
    rng = np.random.default_rng(cfg.seed)
    log = []
    for attempt in range(cfg.max_retries + 1):
        gamma = complex(*rng.normal(size=2))
        gamma /= abs(gamma)
        patch = [complex(*v) for v in rng.normal(size=(n, 2))]
        tol = cfg.tol_track / (2**attempt)
        endpoints = []
        escalated = 0
        failed = 0
        for i, start in enumerate(_start_points(n, patch)):
            if cfg.precision > 53:
                x, t, status, _ = _track_mp(m_float[:n], patch, gamma, start, cfg)
            else:
                x, t, status, _ = kernels.track_path(list(m_float[:n]), patch, gamma, start, tol=tol)
                if status in (kernels.FAILED, kernels.MAX_STEPS):
                    # shorter steps with a looser corrector usually get through
                    # the slow approach to a singular endpoint
                    x, t, status, _ = kernels.track_path(
                        list(m_float[:n]), patch, gamma, start, tol=1e-8, h_max=0.02
                    )
                if status in (kernels.FAILED, kernels.MAX_STEPS) and t < ENDGAME_T:
                    # a late failure is the slow approach to a singular point;
                    # extra precision cannot help if it already shows a
                    # coincidence pattern
                    early = _classify(i, x, t, kernels.NEAR_END, m_float, family, cfg)
                    if early.classification == "B":
                        endpoints.append(early)
                        continue
                if status in (kernels.FAILED, kernels.MAX_STEPS):
                    # resume at extended precision from the last point on the path
                    escalated += 1
                    x, t, status, _ = _track_mp(m_float[:n], patch, gamma, x, cfg, t0=t)
            if status in (kernels.FAILED, kernels.MAX_STEPS):
                failed += 1
            endpoints.append(_classify(i, x, t, status, m_float, family, cfg))
        solutions = sorted((e for e in endpoints if e.classification == "S"), key=_canonical_order)
        if failed:
            log.append(f"attempt {attempt}: {failed} path(s) failed")
            continue
        if _duplicates(solutions, cfg.tol_sep):
            log.append(f"attempt {attempt}: two paths reached the same solution")
            continue
        return SolveResult(
            solutions=solutions,
            endpoints=endpoints,
            n_paths=n_paths,
            attempts=attempt + 1,
            gamma=gamma,
            seed=cfg.seed,
            backend="mpmath" if cfg.precision > 53 else kernels.BACKEND,
            escalated_paths=escalated,
            attempt_log=log,
        )
    raise CertificationInconclusive("; ".join(log))
