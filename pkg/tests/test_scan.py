import random
from fractions import Fraction

import pytest

from polyfiber.combinatorics import symmetry_profile, zero_sum_masks
from polyfiber.counting import fiber_count
from polyfiber.errors import DomainError
from polyfiber.exact import gr
from polyfiber.scan import (
    breaking_perturbations,
    check_stratum,
    nullspace,
    primitive_zero_sum_vectors,
    run_scan,
    stratum_perturbations,
)
from polyfiber.spectrum import ResidueVector

from known_values import PAIRED_D6


def R(vals):
    return ResidueVector([gr(v) for v in vals])


def test_primitive_vectors_d4_bound_2():
    vecs = list(primitive_zero_sum_vectors(4, 2))
    assert (-1, -1, 1, 1) in vecs and (-2, -1, 1, 2) in vecs
    for v in vecs:
        assert sum(v) == 0 and 0 not in v and list(v) == sorted(v)
    # one representative per sign class
    assert (-2, -2, 2, 2) not in vecs
    assert len(vecs) == len(set(vecs))
    assert not any(tuple(sorted(-x for x in v)) in vecs and tuple(sorted(-x for x in v)) != v for v in vecs)


def test_scan_d4_soundness_and_converse():
    rep = run_scan(4, 4)
    assert rep.ok
    small = [r for r in rep.rows if r.l1 <= 4]
    assert small and all(r.count == 0 and r.shortcut for r in small)
    row = next(r for r in rep.rows if r.vector == (-2, -1, 1, 2))
    assert row.count == 1 and row.l1 == 6


def test_scan_flags_paired_d6():
    rep = run_scan(6, 2)
    row = next(r for r in rep.rows if r.vector == (-2, -1, -1, 1, 1, 2))
    assert row.count == 0 and row.shortcut


def test_sampled_scan_is_reproducible():
    a = run_scan(6, 5, exhaustive=False, samples=40, seed=3)
    b = run_scan(6, 5, exhaustive=False, samples=40, seed=3)
    assert a.to_dict(include_rows=True) == b.to_dict(include_rows=True)
    assert len(a.rows) == 40 and a.ok


def test_scan_d8_records_candidates_without_judgment():
    rep = run_scan(8, 1, exhaustive=True)
    d = rep.to_dict()
    assert d["converse_checked"] is False
    assert rep.converse_violations == []


def test_scan_rejects_small_degree():
    with pytest.raises(DomainError):
        run_scan(3, 2)


def test_nullspace():
    basis = nullspace([[1, 1, 1], [1, -1, 0]], 3)
    assert len(basis) == 1
    x = basis[0]
    assert x[0] + x[1] + x[2] == 0 and x[0] == x[1]
    assert nullspace([], 2) == [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]


def test_stratum_perturbations_keep_signature():
    m = R(PAIRED_D6)
    rng = random.Random(1)
    fam, prof = set(zero_sum_masks(m)), symmetry_profile(m)
    for p in stratum_perturbations(m, 5, rng):
        assert set(zero_sum_masks(p)) == fam
        assert symmetry_profile(p).blocks == prof.blocks
        assert p.residues != m.residues


def test_breaking_perturbations_shrink_family():
    m = R(PAIRED_D6)
    fam = set(zero_sum_masks(m))
    prof = symmetry_profile(m)
    perts = breaking_perturbations(m, 8, random.Random(2))
    assert perts
    for p in perts:
        assert set(zero_sum_masks(p)) < fam
        assert symmetry_profile(p).refines(prof)
        assert fiber_count(p).count >= fiber_count(m).count


def test_breaking_needs_relations():
    assert breaking_perturbations(R(["1", "1", "1", "1", "-4"]), 3, random.Random(0)) == []


def test_check_stratum_example():
    chk = check_stratum(R(["1", "1", "-1", "-1", "2", "-2"]), 6, random.Random(5))
    assert chk.ok and chk.preserved == 6 and chk.broken > 0
