import random
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfiber.combinatorics import members_mask, stratum_signature, symmetry_profile, ZeroSumPartition
from polyfiber.counting import (
    budget_identity,
    emptiness_by_integer_ratio,
    falling,
    fiber_count,
    integer_ratio_vector,
    multiplicity_product,
    multiplicity_recursive,
    multiplicity_table,
    orbit_counts,
    point_count,
    scaled_spectrum,
)
from polyfiber.errors import ConsistencyError, DomainError, InvalidSpectrumError
from polyfiber.exact import gr
from polyfiber.sampling import random_generic_spectrum, random_structured_residues
from polyfiber.scan import breaking_perturbations, stratum_perturbations
from polyfiber.spectrum import ResidueVector, SpectrumInput

from known_values import PAIRED_D6, PAIRED_D6_PARTITIONS, PAIRED_D6_E


def R(vals):
    return ResidueVector([gr(v) for v in vals])


def P(blocks):
    return ZeroSumPartition(members_mask(b) for b in blocks)


def test_falling():
    assert falling(5, 0) == 1 and falling(5, 2) == 20 and falling(4, 4) == 24


def test_paired_d6_table():
    m = R(PAIRED_D6)
    sig = stratum_signature(m)
    for k, blocks in PAIRED_D6_PARTITIONS.items():
        assert multiplicity_recursive(P(blocks), sig) == PAIRED_D6_E[k], k
        assert multiplicity_product(P(blocks), m) == PAIRED_D6_E[k], k
    assert point_count(m) == 0
    rep = fiber_count(m)
    assert rep.count == 0 and rep.s_d == 0
    assert rep.empty_witness == (1, 1, 2, -1, -1, -2)
    assert sum(map(abs, rep.empty_witness)) == 8
    assert rep.budget == (120, 120)


def test_maximal_partitions_follow_factorial_rule():
    rng = random.Random(4)
    for _ in range(30):
        m = random_structured_residues(7, rng, "integer")
        sig = stratum_signature(m)
        e = multiplicity_table(sig)
        for p, ep in zip(sig.partitions, e):
            if p in sig.maximal():
                expected = 1
                for n in p.block_sizes():
                    expected *= factorial(n - 1)
                assert ep == expected


def test_multiplicity_of_foreign_partition():
    sig = stratum_signature(R(PAIRED_D6))
    with pytest.raises(DomainError):
        multiplicity_recursive(P([[1, 2], [3, 4, 5, 6]]), sig)


@pytest.mark.parametrize(
    "vals, s",
    [
        (["1", "1", "-1", "-1"], 0),
        (["1", "2", "-1", "-2"], 1),
        (["1", "1", "1", "1", "-4"], 6),
        (["1", "-1"], 1),
        (["1", "2", "-3"], 1),
        (["1", "2", "3", "-6"], 2),
    ],
)
def test_point_count_examples(vals, s):
    assert point_count(R(vals)) == s


@given(st.integers(0, 10**6), st.integers(4, 8))
def test_generic_point_count(seed, d):
    s = random_generic_spectrum(d, random.Random(seed))
    rep = fiber_count(s)
    assert rep.s_d == factorial(d - 2) == rep.count
    assert rep.signature.partitions == ()


def test_scaled_spectrum_examples():
    m = R(["1", "1", "1", "1", "-4"])
    prof = symmetry_profile(m)
    sc = scaled_spectrum(m, prof, 2, 4)
    assert sc.d_t == 2 and sc.residues.residues == R(["4", "-4"]).residues
    sc = scaled_spectrum(m, prof, 2, 2)
    assert sc.d_t == 3 and sc.residues.residues == R(["2", "2", "-4"]).residues
    m2 = R(["1", "2", "-1", "-2"])
    for w in range(1, 5):
        for t in (2, 3):
            with pytest.raises(DomainError):
                scaled_spectrum(m2, symmetry_profile(m2), w, t)
    with pytest.raises(DomainError):
        scaled_spectrum(m, prof, 2, 3)


@given(st.integers(0, 10**6), st.integers(4, 10))
def test_scaled_spectra_are_valid(seed, d):
    m = random_structured_residues(d, random.Random(seed), "repeated")
    prof = symmetry_profile(m)
    for w, g in enumerate(prof.gcds, start=1):
        for t in range(2, g + 1):
            if g % t == 0:
                sc = scaled_spectrum(m, prof, w, t)
                assert len(sc.residues) == sc.d_t == (d - 1) // t + 1


def test_orbit_counts_symmetric_example():
    table = orbit_counts(R(["1", "1", "1", "1", "-4"]))
    assert table.higher == {(2, 4): 1, (2, 2): 0}
    assert table.c1 == 0 and table.total == 1


def test_orbit_counts_trivial_group():
    s = random_generic_spectrum(6, random.Random(1))
    table = orbit_counts(fiber_count(s).residues)
    assert table.higher == {} and table.c1 == 24


def test_orbit_counts_paired_d6_all_zero():
    table = orbit_counts(R(PAIRED_D6))
    assert table.c1 == 0 and all(v == 0 for v in table.higher.values())


def test_non_integral_orbit_count_raises_with_ledger():
    with pytest.raises(ConsistencyError) as info:
        orbit_counts(R(["1", "1", "1", "1", "-4"]), s_d=7)
    assert "c1" in info.value.ledger
    assert info.value.exit_code == 4


def test_fiber_count_examples():
    assert fiber_count(R(PAIRED_D6)).count == 0
    assert fiber_count(SpectrumInput([gr(v) for v in ["0", "0", "0", "0", "5/4"]])).count == 1
    with pytest.raises(InvalidSpectrumError):
        fiber_count(R(["1", "2", "-3"]))


@pytest.mark.parametrize(
    "vals, witness",
    [
        (["1", "1", "-1", "-1"], (1, 1, -1, -1)),
        (PAIRED_D6, (1, 1, 2, -1, -1, -2)),
        (["1", "2", "-1", "-2"], None),
        (["1/2", "1/2", "-1/2", "-1/2"], (1, 1, -1, -1)),
        (["0+1i", "0+1i", "0-1i", "0-1i"], (1, 1, -1, -1)),
        (["1+1i", "1", "-1", "-1-1i"], None),
    ],
)
def test_emptiness_examples(vals, witness):
    assert emptiness_by_integer_ratio(R(vals)) == witness


def test_integer_ratio_vector_sign_normalized():
    assert integer_ratio_vector(R(["-2", "-4", "6"])) == (1, 2, -3)


@given(st.integers(0, 10**6), st.integers(4, 7))
def test_invariants_on_random_inputs(seed, d):
    m = random_structured_residues(d, random.Random(seed))
    rep = fiber_count(m)
    assert 0 <= rep.count <= factorial(d - 2)
    assert 0 <= rep.s_d <= factorial(d - 2)
    assert rep.e_table == rep.e_product
    assert all(e >= 0 for e in rep.e_table)
    lhs, rhs = budget_identity(rep.signature, rep.e_table, rep.s_d)
    assert lhs == rhs
    if rep.empty_witness is not None:
        assert rep.count == 0


@given(st.integers(0, 10**6), st.integers(4, 7))
def test_scale_invariance(seed, d):
    rng = random.Random(seed)
    m = random_structured_residues(d, rng)
    factor = gr(f"{rng.randint(1, 9)}/{rng.randint(1, 9)}{rng.choice('+-')}{rng.randint(0, 9)}i")
    assert fiber_count(m).ledger() == fiber_count(m.scale(factor)).ledger()


@given(st.integers(0, 10**6), st.integers(4, 7))
def test_stratum_constancy(seed, d):
    rng = random.Random(seed)
    m = random_structured_residues(d, rng)
    ledger = fiber_count(m).ledger()
    for p in stratum_perturbations(m, 3, rng):
        assert fiber_count(p).ledger() == ledger


@given(st.integers(0, 10**6), st.integers(4, 7))
def test_monotonicity_under_specialization(seed, d):
    rng = random.Random(seed)
    m = random_structured_residues(d, rng, rng.choice(["integer", "cancelling"]))
    base = fiber_count(m).count
    for p in breaking_perturbations(m, 3, rng):
        assert fiber_count(p).count >= base


def test_degree_below_four_rejected():
    with pytest.raises(InvalidSpectrumError):
        fiber_count(R(["1", "1", "-2"]))


def test_sub_spectra_reported():
    rep = fiber_count(R(PAIRED_D6))
    roles = [r for r, _, _ in rep.sub_spectra]
    assert any("[2, 3, 5, 6]" in r for r in roles)
    for _, sub, s in rep.sub_spectra:
        assert s == point_count(sub)
