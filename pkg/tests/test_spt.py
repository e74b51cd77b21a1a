from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sptcrank import spt
from sptcrank.combinatorics import oracle_overline_rank, oracle_rank_counts, oracle_spt
from sptcrank.qseries import eta
from sptcrank.zqseries import ZQSeries, zq_eval_root, zq_eval_z1, zq_first_mismatch

N = 80


@pytest.mark.parametrize("X", spt.FAMILIES)
def test_z1_specialization_matches_direct_series(X):
    assert zq_eval_z1(spt.spt_crank_series(X, N)) == spt.spt_series(X, N)


@pytest.mark.parametrize("X", spt.FAMILIES)
def test_crank_coefficients_palindromic(X):
    assert spt.spt_crank_series(X, N).is_palindromic()


@pytest.mark.parametrize("X", spt.FAMILIES)
def test_root_series_matches_bivariate_evaluation(X):
    s = spt.spt_crank_series(X, 60)
    for p in (3, 5, 7):
        assert spt.spt_crank_at_root(X, p, 60) == zq_eval_root(s, p)


@pytest.mark.parametrize("X", spt.FAMILIES + ("plain", "bar", "M2"))
def test_series_against_enumeration(X):
    s = spt.spt_series(X, 16)
    assert [s[n] for n in range(1, 17)] == [oracle_spt(X, n) for n in range(1, 17)]


def test_spot_values():
    assert spt.spt_series("plain", 10)[4] == 10
    assert spt.spt_series("A1", 10)[1] == 1
    assert dict(spt.spt_crank_series("A1", 5).coefficient(1)) == {0: 1}


def test_e4_from_overpartition_spt():
    M = 100
    e4 = spt.spt_series("E4", M)
    bar = spt.spt_series("bar", M)
    pbar = spt.overpartition_series(M)
    for n in range(1, M + 1):
        assert 2 * e4[n] == 2 * bar[n] - pbar[n]


def test_c1_c5_agree_on_odd_exponents():
    c1, c5 = spt.spt_crank_series("C1", N), spt.spt_crank_series("C5", N)
    for n in range(1, N + 1, 2):
        assert c1.coefficient(n) == c5.coefficient(n)


@given(st.sampled_from(spt.FAMILIES), st.integers(1, 60), st.sampled_from((2, 3, 5, 7)))
def test_residue_classes_sum_to_spt(X, n, t):
    assert sum(spt.m_residues(X, t, n, N)) == spt.spt_series(X, N)[n]
    assert sum(spt.m_residue(X, k, t, n, N) for k in range(t)) == spt.spt_series(X, N)[n]


def test_a1_residue_classes_equal_on_multiples_of_three():
    for n in range(3, N + 1, 3):
        m = spt.m_residues("A1", 3, n, N)
        assert m[0] == m[1] == m[2] == spt.spt_series("A1", N)[n] // 3


@pytest.mark.parametrize("X", spt.FAMILIES)
def test_z_support_bound(X):
    s = spt.spt_crank_series(X, N)
    assert s.support_within(1)
    assert spt.m_coeff(X, N + 2, N) == 0


@pytest.mark.parametrize("X,t,r", spt.CONGRUENCES)
def test_congruences(X, t, r):
    rep = spt.congruence_check(X, t, r, 300)
    assert rep.mod_passed and rep.root_passed
    assert rep.witness is None


def test_congruence_negative_control():
    rep = spt.congruence_check("A1", 3, 1, 60)
    assert not rep.passed
    assert rep.witness is not None
    assert spt.spt_series("A1", 60)[rep.witness] % 3 != 0 or rep.root_failures


def test_congruence_without_cyclotomic_ring():
    rep = spt.congruence_check("A1", 4, 0, 40)
    assert rep.root_failures is None
    assert "skipped" in rep.root_note


def test_unknown_family():
    with pytest.raises(KeyError):
        spt.spt_series("Z9", 10)


def test_rank_and_overline_rank_against_enumeration():
    R = spt.rank_series(16)
    Rbar = spt.overline_rank_series(12)
    for n in range(17):
        assert dict(R.coefficient(n)) == oracle_rank_counts(n)
    for n in range(13):
        assert dict(Rbar.coefficient(n)) == oracle_overline_rank(n)


def test_crank_forms_agree():
    assert zq_first_mismatch(spt.crank_series(60), spt.crank_series_lambert(60)) is None
    assert zq_eval_z1(spt.crank_series(10))[4] == 5


def test_rank_minus_crank():
    s = spt.spt_crank_series("plain", 60)
    kernel = ZQSeries.from_laurent({0: 2, 1: -1, -1: -1}, 60)
    assert zq_first_mismatch(spt.rank_series(60) - spt.crank_series(60), kernel * s) is None


def test_residual_cranks():
    over = spt.residual_crank_series("overpartition", 20)
    assert zq_eval_z1(over)[3] == 8
    assert dict(over.coefficient(0)) == {0: 1}
    odd = spt.residual_crank_series("odd", 20)
    assert zq_eval_z1(odd) == eta(2, 20).invert()
    with pytest.raises(ValueError):
        spt.residual_crank_series("even", 5)


def test_r2_relation():
    M = 60
    kernel = ZQSeries.from_laurent({0: 2, 1: -1, -1: -1}, M)
    zsum = ZQSeries.from_laurent({1: 1, -1: 1}, M)
    lhs = spt.r2_series(M) * 2
    rhs = kernel + zsum * spt.overline_rank_series(M)
    assert zq_first_mismatch(lhs, rhs) is None


def test_rank_family_at_roots():
    for build in (spt.rank_series, spt.crank_series, spt.r1_series, spt.r2_series):
        full = build(40)
        for p in (3, 5):
            assert build(40, at=p) == zq_eval_root(full, p)
