from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sptcrank.combinatorics import enum_partitions
from sptcrank.qseries import (
    QMonomial,
    QSeries,
    eta,
    first_mismatch,
    jacprod,
    lambert_sum,
    partition_series,
    poch_finite,
    poch_infinite,
    qs_invert,
    qs_mul,
    qs_substitute_power,
    theta_jtp,
)
from sptcrank.ring import CycInt

# p(n) for n <= 40, from the restricted-part recurrence (independent of q-series code)
def _partition_counts(limit):
    counts = [1] + [0] * limit
    for part in range(1, limit + 1):
        for n in range(part, limit + 1):
            counts[n] += counts[n - part]
    return counts


P40 = _partition_counts(40)


def q(e, order=20):
    return QSeries.monomial(e, order)


def test_geometric_inverse():
    one_minus_q = QSeries([1, -1], order=10)
    geo = QSeries([1] * 11)
    assert one_minus_q * geo == QSeries.one(10)
    assert qs_invert(one_minus_q).coeffs() == [1] * 11


def test_truncation_to_smaller_order():
    a = QSeries([1, 2, 3, 4, 5, 6])
    b = QSeries([1] * 10)
    assert (a * b).order == 5
    assert (a + b).order == 5


def test_euler_product_inverse():
    qq = poch_infinite(QMonomial(1, 1), 1, 60)
    assert qq * qq.invert() == QSeries.one(60)
    assert qq.invert()[4] == 5


def test_invert_needs_unit():
    with pytest.raises(ZeroDivisionError):
        QSeries([0, 1, 1]).invert()
    with pytest.raises(ZeroDivisionError):
        QSeries([3, 1]).invert()


def test_substitute_power():
    assert qs_substitute_power(QSeries([1, 1], order=5), 3).coeffs() == [1, 0, 0, 1, 0, 0]
    pent = theta_jtp("pentagonal", 30)
    assert all(c == 0 for c in qs_substitute_power(pent, 2).coeffs()[1::2])
    assert eta(2, 16).invert()[8] == 5


def test_pochhammer_finite_examples():
    assert poch_finite(QMonomial(1, 1), 1, 0, 5) == QSeries.one(5)
    assert poch_finite(QMonomial(1, 1), 1, 2, 5).coeffs() == [1, -1, -1, 1, 0, 0]
    assert poch_finite(QMonomial(-1, 1), 1, 2, 5).coeffs() == [1, 1, 1, 1, 0, 0]


def test_pochhammer_infinite_examples():
    assert poch_infinite(QMonomial(1, 1), 1, 8).coeffs() == [1, -1, -1, 0, 0, 1, 0, 1, 0]
    assert poch_infinite(QMonomial(1, 1), 2, 4).coeffs() == [1, -1, 0, -1, 1]
    with pytest.raises(ValueError):
        poch_infinite(QMonomial(1, 0), 1, 4)


def test_euler_splitting():
    N = 120
    neg = poch_infinite(QMonomial(-1, 1), 1, N)
    odd = poch_infinite(QMonomial(1, 1), 2, N)
    even = poch_infinite(QMonomial(1, 2), 2, N)
    assert neg * odd == QSeries.one(N)
    assert odd * even == eta(1, N)
    # the four-factor quotient is 1/(q;q^2), not 1
    assert neg * odd * even / eta(1, N) == odd.invert()


def test_jacprod():
    assert jacprod(1, 2, 3).coeffs() == [1, -2, 1, -2]
    for a in range(1, 7):
        assert jacprod(a, 7, 80) == jacprod(7 - a, 7, 80)
    with pytest.raises(ValueError):
        jacprod(5, 5, 10)
    with pytest.raises(ValueError):
        jacprod(0, 5, 10)


def test_theta_forms():
    N = 150
    t1 = theta_jtp(1, N)
    assert t1.coeffs()[:10] == [1, -2, 0, 0, 2, 0, 0, 0, 0, -2]
    assert t1 == poch_infinite(QMonomial(1, 1), 2, N) * eta(1, N)
    assert theta_jtp("pentagonal", N) == eta(1, N)
    # z = 1 in the second form has the factor (1; q) and vanishes
    assert theta_jtp(2, N).is_zero()
    # z = -q: (-q, -1, q; q) = 2 (-q;q)^2 (q;q)
    lhs = theta_jtp(2, N, sign=-1, shift=1)
    rhs = poch_infinite(QMonomial(-1, 1), 1, N) ** 2 * eta(1, N) * 2
    assert lhs == rhs


def test_partition_counts_match():
    pn = partition_series(40)
    assert pn.coeffs() == P40
    assert [len(enum_partitions(n)) for n in range(16)] == P40[:16]


def test_lambert_examples():
    only_n0 = lambert_sum(lambda n: 75 * n * (n + 1), lambda n: 50 * n + 10, 9)
    assert only_n0 == QSeries.one(9)
    with pytest.raises(ValueError):
        lambert_sum(lambda n: n * n, lambda n: n, 10)


def test_lambert_canonicalization():
    # n = -1 of 9n+3 gives -q^(6 + A(-1)) / (1 - q^6)
    N = 60
    A = lambda n: 9 * n * n + 9 * n
    got = lambert_sum(A, lambda n: 9 * n + 3, N)
    want = QSeries.zero(N)
    for n in range(-4, 5):
        b = 9 * n + 3
        sgn = (-1) ** (n % 2)
        if b > 0:
            term = QSeries.monomial(A(n), N) * QSeries.one(N).div_binomial(1, b)
        else:
            term = -QSeries.monomial(A(n) - b, N) * QSeries.one(N).div_binomial(1, -b)
        want = want + term * sgn
    assert got == want


def test_lambert_padding_independent():
    A = lambda n: 3 * n * n + 2 * n
    B = lambda n: 5 * n + 2
    small = lambert_sum(A, B, 40)
    big = lambert_sum(A, B, 200)
    assert first_mismatch(small, big.truncate(40)) is None


def test_cyclotomic_series_promotion():
    a = QSeries([1, 2, 3])
    b = QSeries([CycInt.zeta(5), 0, 1])
    assert (a + b).root == 5
    with pytest.raises(ValueError):
        b + QSeries([CycInt.zeta(3), 0, 0])
    w = CycInt.zeta(5) + CycInt.zeta(5, 4)
    s = QSeries.one(10) - QSeries.monomial(1, 10, w)
    assert (s * s.invert()) == QSeries.one(10, 5)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(7, 12))
def test_jacprod_products_commute(a, b, c, m):
    N = 60
    x, y, z = jacprod(a, m, N), jacprod(b, m, N), jacprod(c, m, N)
    assert qs_mul(x, y) == qs_mul(y, x)
    assert (x * y) * z == x * (y * z)


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=25), st.integers(1, 4))
def test_invert_roundtrip(coeffs, k):
    s = QSeries([1] + coeffs)
    assert s * s.invert() == QSeries.one(s.order)
    assert qs_substitute_power(s, k).invert() == qs_substitute_power(s.invert(), k)
