import random

import numpy as np
import pytest

from polyfiber import kernels
from polyfiber.combinatorics import symmetry_profile, zero_sum_partitions, zero_sum_subsets
from polyfiber.errors import CertificationFailure, CertificationInconclusive, DomainError
from polyfiber.exact import gr
from polyfiber.oracle import (
    SolverConfig,
    certify,
    confluent_block_determinant,
    confluent_closed_form,
    confluent_matrix,
    enumerate_solutions,
    orbit_quotient,
    reconstruct_map,
)
from polyfiber.oracle import homotopy
from polyfiber.oracle.orbits import act, group_elements
from polyfiber.sampling import random_generic_spectrum, random_structured_residues
from polyfiber.spectrum import ResidueVector, SpectrumInput, residues_from_eigenvalues

from known_values import PAIRED_D6, SYMMETRIC_D5, SYMMETRIC_D5_EIGENVALUES


def R(vals):
    return ResidueVector([gr(v) for v in vals])


@pytest.fixture(scope="module")
def symmetric_run():
    m = R(SYMMETRIC_D5)
    return m, enumerate_solutions(m)


def test_generic_d4_has_two_points():
    s = random_generic_spectrum(4, random.Random(0))
    res = enumerate_solutions(residues_from_eigenvalues(s))
    assert len(res.solutions) == 2 and res.n_paths == 2
    assert res.counts()["S"] == 2


def test_paired_d6_has_no_points_and_lands_on_coincidences():
    m = R(PAIRED_D6)
    res = enumerate_solutions(m)
    assert res.solutions == [] and res.n_paths == 24
    counts = res.counts()
    assert counts["B"] == 24 and counts["anomaly"] == 0
    allowed = {tuple(map(tuple, p.as_lists())) for p in zero_sum_partitions(zero_sum_subsets(m), 6)}
    for e in res.endpoints:
        assert tuple(map(tuple, e.pattern)) in allowed


def test_cancelling_pairs_one_point():
    res = enumerate_solutions(R(["1", "2", "-1", "-2"]))
    assert len(res.solutions) == 1


def test_solution_invariants(symmetric_run):
    _, res = symmetric_run
    cfg = SolverConfig()
    assert len(res.solutions) == 6
    for sol in res.solutions:
        assert sol.residual < cfg.tol_res and sol.separation > cfg.tol_sep
        assert np.isfinite(sol.condition)
        full = sol.full_point()
        assert full[-2] == 1 and full[-1] == 0
    pts = [np.array(s.chart_point) for s in res.solutions]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert np.max(np.abs(pts[i] - pts[j])) > 1e-3


def test_newton_converges_quadratically():
    s = random_generic_spectrum(6, random.Random(2))
    res = enumerate_solutions(residues_from_eigenvalues(s))
    for sol in res.solutions:
        assert sol.newton_contraction is None or sol.newton_contraction < 1e6


def test_determinism():
    m = random_structured_residues(6, random.Random(3))
    a = enumerate_solutions(m, SolverConfig(seed=5))
    b = enumerate_solutions(m, SolverConfig(seed=5))
    assert [e.to_dict() for e in a.endpoints] == [e.to_dict() for e in b.endpoints]
    assert a.gamma == b.gamma


def test_extended_precision_tier():
    m = R(["1", "2", "3", "-6"])
    res = enumerate_solutions(m, SolverConfig(precision=128))
    assert res.backend == "mpmath" and len(res.solutions) == 2


def test_path_budget_and_degree_limits():
    with pytest.raises(DomainError):
        enumerate_solutions(R(["1", "2", "3", "4", "5", "6", "7", "-28"]), SolverConfig(path_budget=100))
    with pytest.raises(DomainError):
        enumerate_solutions(R(["1", "2", "-3"]))


def test_persistent_path_failure_is_inconclusive(monkeypatch):
    def broken(m, patch, gamma, start, **kw):
        return list(start), 0.5, kernels.FAILED, 10

    monkeypatch.setattr(homotopy.kernels, "track_path", broken)
    monkeypatch.setattr(homotopy, "_track_mp", lambda *a, **k: (list(a[3]), 0.5, kernels.FAILED, 10))
    with pytest.raises(CertificationInconclusive):
        enumerate_solutions(R(["1", "2", "3", "-6"]), SolverConfig(max_retries=1))


def test_orbits_symmetric_example(symmetric_run):
    m, res = symmetric_run
    orbits = orbit_quotient(res.solutions, symmetry_profile(m))
    assert len(orbits) == 1
    o = orbits.orbits[0]
    assert (o.size, o.stabilizer_order, o.zero_block, o.cyclic) == (6, 4, 2, True)
    assert orbits.group_order == 24


def test_orbits_trivial_group():
    s = random_generic_spectrum(5, random.Random(4))
    m = residues_from_eigenvalues(s)
    res = enumerate_solutions(m)
    orbits = orbit_quotient(res.solutions, symmetry_profile(m))
    assert len(orbits) == 6
    assert all(o.size == 1 and o.stabilizer_order == 1 for o in orbits.orbits)


def test_orbits_empty():
    assert len(orbit_quotient([], symmetry_profile(R(PAIRED_D6)))) == 0


@pytest.mark.parametrize("seed", range(6))
def test_orbit_stabilizer_relations(seed):
    m = random_structured_residues(6, random.Random(seed), "repeated")
    prof = symmetry_profile(m)
    res = enumerate_solutions(m)
    orbits = orbit_quotient(res.solutions, prof)
    assert sum(o.size for o in orbits.orbits) == len(res.solutions)
    for o in orbits.orbits:
        assert o.size * o.stabilizer_order == prof.group_order()
        if o.stabilizer_order > 1:
            assert prof.gcds[o.zero_block - 1] % o.stabilizer_order == 0
            assert o.cyclic


def test_group_action_is_an_action(symmetric_run):
    m, res = symmetric_run
    prof = symmetry_profile(m)
    pts = np.array([s.full_point() for s in res.solutions])
    elems = list(group_elements(prof))
    assert len(elems) == 24
    a, b = elems[5], elems[17]
    ab = tuple(a[b[i]] for i in range(5))
    assert np.allclose(act(a, act(b, pts)), act(ab, pts))


def test_missing_image_is_detected(symmetric_run):
    m, res = symmetric_run
    with pytest.raises(CertificationFailure, match="matches no"):
        orbit_quotient(res.solutions[:-1], symmetry_profile(m))


def test_ambiguous_match_is_detected(symmetric_run):
    m, res = symmetric_run
    with pytest.raises(CertificationFailure, match="ambiguous"):
        orbit_quotient(res.solutions + res.solutions[:1], symmetry_profile(m))


def test_reconstructed_maps(symmetric_run):
    m, res = symmetric_run
    s = SpectrumInput([gr(v) for v in SYMMETRIC_D5_EIGENVALUES])
    lam = np.array([complex(v) for v in s.eigenvalues])
    spectra = []
    for sol in res.solutions:
        f = reconstruct_map(sol, s)
        assert f.multiplier_residual < 1e-8
        assert abs(f.index_sum) < 1e-8
        zeta = np.array(f.fixed_points)
        assert np.allclose(f(zeta), zeta, atol=1e-9 * max(1, np.max(np.abs(zeta))))
        assert np.allclose([f.derivative(z) for z in zeta], lam, atol=1e-8)
        spectra.append(sorted(np.round(f.multipliers, 8), key=lambda z: (z.real, z.imag)))
    # points of one orbit give conjugate maps: the same multiplier multiset
    assert all(np.allclose(sp, spectra[0]) for sp in spectra)


def test_reconstruct_generic_d4():
    s = random_generic_spectrum(4, random.Random(6))
    res = enumerate_solutions(residues_from_eigenvalues(s))
    for sol in res.solutions:
        assert reconstruct_map(sol, s).multiplier_residual < 1e-8


def test_reconstruct_rejects_non_regular_point():
    res = enumerate_solutions(R(PAIRED_D6))
    with pytest.raises(DomainError):
        reconstruct_map(res.endpoints[0], R(PAIRED_D6))


@pytest.mark.parametrize(
    "vals, exact, points, orbits",
    [
        (SYMMETRIC_D5, 1, 6, 1),
        (PAIRED_D6, 0, 0, 0),
        (["1", "2", "3", "-6"], 2, 2, 2),
        (["1", "1", "1", "-1", "-1", "-1"], None, None, None),
    ],
)
def test_certify(vals, exact, points, orbits):
    c = certify(R(vals))
    assert c.verdict == "PASS", c.reasons
    assert c.point_count == c.report.s_d and c.orbit_count == c.exact_count
    if exact is not None:
        assert (c.exact_count, c.point_count, c.orbit_count) == (exact, points, orbits)
    assert c.scale_assumed


def test_certify_with_true_eigenvalues():
    c = certify(SpectrumInput([gr(v) for v in SYMMETRIC_D5_EIGENVALUES]))
    assert c.verdict == "PASS" and not c.scale_assumed


@pytest.mark.parametrize("tol_sep", [0.5, 0.9])
def test_fault_injection_never_passes(tol_sep):
    # an absurd separation tolerance hides genuine points
    c = certify(R(["1", "2", "3", "-6"]), SolverConfig(tol_sep=tol_sep, max_retries=0))
    assert c.verdict == "FAIL"
    assert c.point_count != c.report.s_d


def test_fault_injection_residual_tolerance():
    c = certify(R(["1", "2", "3", "4", "-10"]), SolverConfig(tol_res=1e-300, max_retries=0))
    assert c.verdict == "FAIL"


def test_confluent_examples():
    assert confluent_block_determinant([3], [gr("2+1i")]) == 1
    a1, a2 = gr("1/2"), gr("3-2i")
    assert confluent_block_determinant([1, 1], [a1, a2]) == 2 * (a2 - a1)
    assert confluent_block_determinant([2, 1], [a1, a1]) == 0
    assert confluent_closed_form([2, 1], [a1, a1]) == 0


def test_confluent_matrix_shape_and_entries():
    mat = confluent_matrix([2, 1], [gr(2), gr(5)])
    assert len(mat) == 3 and all(len(r) == 3 for r in mat)
    # first block column j=1: C(i,1) * 2^(i-1)
    assert [row[0] for row in mat] == [1, 4, 12]
    assert [row[1] for row in mat] == [0, 1, 6]
    assert [row[2] for row in mat] == [1, 10, 75]


def test_confluent_random_instances():
    rng = random.Random(11)
    for _ in range(30):
        sizes = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        alphas = [gr(f"{rng.randint(-5, 5)}/{rng.randint(1, 4)}{rng.choice('+-')}{rng.randint(0, 5)}i") for _ in sizes]
        assert confluent_block_determinant(sizes, alphas) == confluent_closed_form(sizes, alphas)


def test_confluent_bad_input():
    with pytest.raises(ValueError):
        confluent_matrix([1, 0], [1, 2])
    with pytest.raises(ValueError):
        confluent_matrix([1], [1, 2])
