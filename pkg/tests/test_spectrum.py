import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfiber.errors import InvalidSpectrumError
from polyfiber.exact import gr
from polyfiber.sampling import random_structured_residues
from polyfiber.spectrum import (
    ResidueVector,
    SpectrumInput,
    eigenvalues_from_residues,
    residues_from_eigenvalues,
    validate_v_d,
)


def R(*vals):
    return ResidueVector([gr(v) for v in vals])


def S(*vals):
    return SpectrumInput([gr(v) for v in vals])


@pytest.mark.parametrize(
    "lam, m",
    [
        (("0", "0", "0", "0", "5/4"), ("1", "1", "1", "1", "-4")),
        (("-1", "3", "-1", "3"), ("1/2", "-1/2", "1/2", "-1/2")),
    ],
)
def test_residues_from_eigenvalues(lam, m):
    assert residues_from_eigenvalues(S(*lam)).residues == R(*m).residues


def test_eigenvalue_one_is_rejected():
    with pytest.raises(InvalidSpectrumError):
        residues_from_eigenvalues(S("1", "0", "0", "2"))


def test_residue_sum_must_vanish():
    with pytest.raises(InvalidSpectrumError, match="not in V_d"):
        residues_from_eigenvalues(S("0", "0", "0", "0", "0"))


@pytest.mark.parametrize(
    "m, lam",
    [
        (("1", "1", "1", "1", "-4"), ("0", "0", "0", "0", "5/4")),
        (("1", "2", "-1", "-2"), ("0", "1/2", "2", "3/2")),
    ],
)
def test_eigenvalues_from_residues(m, lam):
    assert eigenvalues_from_residues(R(*m)).eigenvalues == S(*lam).eigenvalues


def test_zero_residue_rejected():
    with pytest.raises(InvalidSpectrumError, match="zero residue"):
        R("1", "-1", "0", "0")


def test_validate_reports():
    assert validate_v_d(S("0", "0", "0", "0", "5/4")) == []
    problems = validate_v_d(S("0", "0", "0", "0", "0"))
    assert len(problems) == 1 and "residue sum != 0" in problems[0] and "5" in problems[0]
    assert validate_v_d(S("1", "0", "0", "2")) == ["lambda_1 = 1"]


def test_validate_lists_every_violation():
    problems = validate_v_d(S("1", "1", "0", "0"))
    assert "lambda_1 = 1" in problems and "lambda_2 = 1" in problems


@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=4, max_value=8))
def test_round_trip(seed, d):
    m = random_structured_residues(d, random.Random(seed))
    s = eigenvalues_from_residues(m)
    assert validate_v_d(s) == []
    assert residues_from_eigenvalues(s).residues == m.residues


@given(st.integers(min_value=0, max_value=10_000))
def test_permutation_equivariance(seed):
    rng = random.Random(seed)
    m = random_structured_residues(6, rng)
    s = eigenvalues_from_residues(m)
    perm = list(range(6))
    rng.shuffle(perm)
    permuted = SpectrumInput([s.eigenvalues[i] for i in perm])
    assert residues_from_eigenvalues(permuted).residues == tuple(m.residues[i] for i in perm)


def test_restrict_and_scale():
    m = R("1", "2", "-1", "-2")
    assert m.restrict([0, 2]).residues == R("1", "-1").residues
    assert m.scale(gr("0+1i")).residues == R("0+1i", "0+2i", "0-1i", "0-2i").residues
