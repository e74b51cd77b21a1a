from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sptcrank.bailey import (
    PAIR_NAMES,
    applicable_variants,
    bailey_lemma_zz,
    bailey_limit,
    registry_lookup,
    verify_pair,
)
from sptcrank.qseries import QMonomial, QSeries, first_mismatch
from sptcrank.zqseries import zq_eval_z1, zq_first_mismatch

FAMILY_PAIRS = ("A1", "A3", "A5", "A7", "C1", "C5", "E2", "E4")


def test_ten_pairs_registered():
    assert len(PAIR_NAMES) == 10
    assert set(FAMILY_PAIRS) <= set(PAIR_NAMES)
    with pytest.raises(KeyError):
        registry_lookup("B9")


def test_alpha_values():
    assert registry_lookup("A1").alpha(3) == {5: 1, 7: 1}
    c1 = registry_lookup("C1")
    assert not c1.alpha(1)
    assert c1.alpha(2) == {2: -1, 4: -1}
    e2 = registry_lookup("E2")
    assert e2.alpha(0) == {0: 1}
    assert [e2.alpha(n) for n in range(1, 5)] == [{0: -2}, {0: 2}, {0: -2}, {0: 2}]


def test_beta_zero_for_a1():
    pair = registry_lookup("A1")
    assert pair.beta(0, 10) == QSeries.one(10)
    assert verify_pair(pair, 0, 10).passed


@pytest.mark.parametrize("name", ("C1", "C5"))
def test_c_group_alpha_vanishes_at_odd_index(name):
    pair = registry_lookup(name)
    assert all(not pair.alpha(n) for n in range(1, 40, 2))


@pytest.mark.parametrize("name", PAIR_NAMES)
def test_pair_definition(name):
    report = verify_pair(registry_lookup(name), 15, 80)
    assert report.passed, report.first_failure


def test_corrupted_alpha_is_caught_at_first_affected_index():
    pair = registry_lookup("A3")
    original = pair.alpha

    def bad(n):
        poly = dict(original(n))
        if n == 4:
            poly[30] = poly.get(30, 0) + 1
        return poly

    report = verify_pair(dataclasses.replace(pair, alpha=bad), 8, 60)
    assert not report.passed
    assert report.first_failure == 4


@pytest.mark.parametrize("name", PAIR_NAMES)
def test_limiting_cases(name):
    pair = registry_lookup(name)
    for variant in applicable_variants(pair):
        lhs, rhs = bailey_limit(pair, variant, 120)
        assert first_mismatch(lhs, rhs) is None, variant


def test_half_power_variants_need_odd_parameter():
    assert 2 not in applicable_variants(registry_lookup("A1"))
    with pytest.raises(ValueError):
        bailey_limit(registry_lookup("A1"), 2, 20)
    generic = registry_lookup("generic1", QMonomial(1, 3))
    assert 2 in applicable_variants(generic)
    lhs, rhs = bailey_limit(generic, 2, 80)
    assert lhs == rhs
    assert 2 not in applicable_variants(registry_lookup("generic1", QMonomial(1, 2)))


@pytest.mark.parametrize("name", FAMILY_PAIRS)
def test_two_variable_lemma(name):
    lhs, rhs = bailey_lemma_zz(registry_lookup(name), 60)
    assert zq_first_mismatch(lhs, rhs) is None
    # at z = 1 every (1;q)_n with n >= 1 vanishes, leaving beta_0 = alpha_0
    assert zq_eval_z1(lhs) == zq_eval_z1(rhs) == registry_lookup(name).beta(0, 60)


@given(st.sampled_from(PAIR_NAMES), st.integers(10, 40))
def test_prefix_stability(name, low):
    pair = registry_lookup(name)
    for n in range(4):
        assert pair.beta(n, low) == pair.beta(n, 2 * low).truncate(low)
    assert verify_pair(pair, 4, low).passed
