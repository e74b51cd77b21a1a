"""Registry of series identities, each checked by building both sides independently.

An :class:`IdentityCase` pairs two builders ``order -> series``.  A builder may
return a one-variable :class:`QSeries` (over Z or Z[zeta_p]), a two-variable
:class:`ZQSeries`, or a list of such series compared component by component.
Two-variable sides are compared on every z^m q^n coefficient, so equal
specializations are not enough to pass.

Dissection cases also carry an arithmetic progression on which the dissected
side must vanish; that is checked separately from the series equality.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Iterable, Sequence

import numpy as np

from ._sums import Term, combine, pochhammer, product, sum_terms
from .qseries import (
    QMonomial,
    QSeries,
    eta,
    first_mismatch,
    jacprod,
    lambert_sum,
    partition_series,
    poch_infinite,
    zeros,
)
from .ring import CycInt
from .spt import (
    FAMILIES,
    crank_series,
    overline_rank_series,
    overpartition_series,
    r1_series,
    r2_series,
    rank_series,
    spt_crank_at_root,
    spt_crank_series,
    spt_series,
)
from .zqseries import ZQSeries, zq_first_mismatch

Builder = Callable[[int], object]

BIVARIATE_ORDER = 200
DISSECTION_ORDER = 250
PRODUCT_ORDER = 400


@dataclass(frozen=True)
class IdentityCase:
    id: str
    description: str
    lhs_builder: Builder
    rhs_builder: Builder
    default_order: int
    tags: tuple[str, ...] = ()
    # (modulus, residue): the right-hand side has no q^(modulus*n + residue) terms
    vanishing: tuple[int, int] | None = None
    vanishing_order: int | None = None


@dataclass
class VerifyReport:
    id: str
    passed: bool
    order: int
    first_mismatch: int | None
    elapsed: float
    vanishing_failures: list[int] | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "pass": self.passed,
            "order": self.order,
            "first_mismatch": self.first_mismatch,
            "millis": int(round(self.elapsed * 1000)),
        }


@dataclass
class SuiteReport:
    cases: list[VerifyReport] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.cases)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.cases if not c.passed)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def as_dict(self, suite: str = "identities") -> dict:
        return {
            "suite": suite,
            "cases": [c.as_dict() for c in self.cases],
            "summary": {"total": self.total, "failed": self.failed},
        }


# ---------------------------------------------------------------------------
# Small building blocks


def _bound(order: int) -> int:
    """Index bound past which every lattice term used below exceeds q^order."""
    return 4 * isqrt(order + 1) + 20


class _Terms:
    """Accumulates coef * z^zexp * q^qexp, dropping q-exponents past the order."""

    def __init__(self, order: int):
        self.order = order
        self.items: list[tuple[int, int, int]] = []

    def add(self, zpoly: Iterable[tuple[int, int]], qexp: int, coef: int) -> None:
        if not zpoly:
            return
        if qexp < 0:
            raise ValueError(f"negative q-exponent {qexp}")
        if qexp <= self.order:
            self.items.extend((z, qexp, coef * c) for z, c in zpoly)

    def zq(self) -> ZQSeries:
        return ZQSeries.from_terms(self.items, self.order)

    def q(self) -> QSeries:
        coeffs = [0] * (self.order + 1)
        for _, n, c in self.items:
            coeffs[n] += c
        return QSeries(coeffs, self.order)

    def at_root(self, p: int) -> QSeries:
        folded = zeros(self.order + 1, p)
        for z, n, c in self.items:
            folded[n, z % p] += c
        return QSeries._wrap(folded[:, : p - 1] - folded[:, p - 1 : p], p)


def _zfac(a: int, b: int, c: int) -> list[tuple[int, int]]:
    """(1 - z^a)(1 - z^b) z^c as (exponent, coefficient) pairs."""
    if a == 0 or b == 0:
        return []
    return [(c, 1), (a + c, -1), (b + c, -1), (a + b + c, 1)]


def _zsym(k: int) -> list[tuple[int, int]]:
    """z^k + z^(1-k)."""
    return [(k, 1), (1 - k, 1)]


ONE = [(0, 1)]


def _zz_inf(order: int) -> ZQSeries:
    """(z, 1/z; q)_inf."""
    return product(combine((pochhammer(1, 1, 0, 1, None, order), 1), (pochhammer(1, -1, 0, 1, None, order), 1)), order, "z")


def _one_plus_z(s: ZQSeries) -> ZQSeries:
    return s + s.shift(zexp=1)


def _times_zz(s: ZQSeries) -> ZQSeries:
    """(1 - z)(1 - 1/z) s."""
    return s.mul_binomial(1, 1, 0).mul_binomial(1, -1, 0)


def _qq(order: int) -> QSeries:
    return eta(1, order)


def _odd(order: int) -> QSeries:
    """(q; q^2)_inf."""
    return poch_infinite(QMonomial(1, 1), 2, order)


def _neg(order: int) -> QSeries:
    """(-q; q)_inf."""
    return poch_infinite(QMonomial(-1, 1), 1, order)


def _w5() -> CycInt:
    """zeta_5 + zeta_5^-1."""
    return CycInt(5, {1: 1, 4: 1})


def _zeta(p: int, *powers: int, const: int = 0) -> CycInt:
    out = CycInt.from_int(p, const)
    for k in powers:
        out = out + CycInt.zeta(p, k)
    return out


def _J(a: int, m: int, order: int) -> QSeries:
    return jacprod(a, m, order)


def _Jprod(args: Sequence[int], m: int, order: int) -> QSeries:
    out = QSeries.one(order)
    for a in args:
        out = out * (eta(m, order) if a == m else jacprod(a, m, order))
    return out


def _mono(e: int, order: int) -> QSeries:
    return QSeries.monomial(e, order)


# ---------------------------------------------------------------------------
# Inner q-sums shared by the double-series forms (one list per summation index k)


def _inner_a1(k: int, order: int) -> list[tuple[int, int]]:
    base = k * (k - 1) // 2
    out = [(base, (-1) ** (k + 1))]
    for n in range(1, _bound(order)):
        e = base + n * (n - 3) // 2 + 2 * k * n
        if e > order:
            break
        s = (-1) ** (n + k + 1)
        out += [(e, s), (e + n, s)]
    return out


def _inner_a3(k: int, order: int) -> list[tuple[int, int]]:
    out = []
    for n in range(_bound(order)):
        e = k * (k + 1) // 2 + n * (n - 3) // 2 + 2 * k * n - 1
        if e > order:
            break
        s = (-1) ** (n + k + 1)
        out += [(e, s), (e + 2 * n + 1, -s)]
    return out


def _inner_c1(k: int, order: int) -> list[tuple[int, int]]:
    out = []
    for n in range(_bound(order)):
        e = k * (k - 1) // 2 + n * (3 * n - 1) // 2 + 3 * k * n
        if e > order:
            break
        s = (-1) ** (k + 1)
        a, b = 2 * k - 1, k + n
        out += [(e, s), (e + a, -s), (e + b, -s), (e + a + b, s)]
    return out


def _inner_e4(k: int, order: int) -> list[tuple[int, int]]:
    out = []
    for n in range(_bound(order)):
        e = k * (k + 1) // 2 + n * n - n + 2 * k * n - 1
        if e > order:
            break
        s = (-1) ** (k + n + 1)
        out += [(e, s), (e + 2 * n + 1, -s)]
    return out


_INNER = {"A1": _inner_a1, "A3": _inner_a3, "C1": _inner_c1, "E4": _inner_e4}


def _double_series(X: str, order: int, zweight: Callable[[int], list[tuple[int, int]]]) -> _Terms:
    acc = _Terms(order)
    inner = _INNER[X]
    for k in range(1, _bound(order)):
        for e, c in inner(k, order):
            acc.add(zweight(k), e, c)
    return acc


# ---------------------------------------------------------------------------
# Left-hand sides built from the spt-crank series


def _cleared(X: str, order: int) -> ZQSeries:
    """(1 + z)(z, 1/z; q)_inf S_X(z, q)."""
    return _one_plus_z(spt_crank_series(X, order) * _zz_inf(order))


# ---------------------------------------------------------------------------
# Introduction and first forms


def _eqintro1_lhs(N: int) -> ZQSeries:
    return _times_zz(spt_crank_series("plain", N))


def _eqintro1_rhs(N: int) -> ZQSeries:
    return rank_series(N) - crank_series(N)


_FIRST_FORM = {
    # family: (exponent of q in the n-th summand, sign, denominator kind)
    "A1": (lambda n: n, lambda n: 1, "A"),
    "A3": (lambda n: 2 * n, lambda n: 1, "A"),
    "A5": (lambda n: n * n + n, lambda n: 1, "A"),
    "A7": (lambda n: n * n, lambda n: 1, "A"),
    "C1": (lambda n: n, lambda n: 1, "C"),
    "C5": (lambda n: (n * n + n) // 2, lambda n: 1, "C"),
    "E2": (lambda n: n, lambda n: (-1) ** n, "E"),
    "E4": (lambda n: 2 * n, lambda n: 1, "E"),
}


def _first_form_rhs(X: str) -> Builder:
    expo, sign, group = _FIRST_FORM[X]

    def build(N: int) -> ZQSeries:
        def factors(n: int):
            def f(L: int):
                zz = combine((pochhammer(1, 1, 0, 1, n, L), 1), (pochhammer(1, -1, 0, 1, n, L), 1))
                if group == "A":
                    den = pochhammer(1, 0, 1, 1, 2 * n, L)
                elif group == "C":
                    den = combine((pochhammer(1, 0, 1, 2, n, L), 1), (pochhammer(1, 0, 1, 1, n, L), 1))
                else:
                    den = pochhammer(1, 0, 2, 2, n, L)
                return combine((zz, 1), (den, -1))

            return f

        def terms():
            n = 1
            while expo(n) <= N:
                yield Term(sign(n), expo(n), factors(n))
                n += 1

        total = sum_terms(terms(), N, "z")
        if group == "A":
            pre = _qq(N)
        elif group == "C":
            pre = _odd(N) * _qq(N)
        else:
            pre = eta(2, N)
        return total * pre

    return build


def _first_form_lhs(X: str) -> Builder:
    return lambda N: spt_crank_series(X, N) * _zz_inf(N)


# ---------------------------------------------------------------------------
# Two-variable series identities


def _thm2_rhs(X: str) -> Builder:
    def build(N: int) -> ZQSeries:
        if X in _INNER:
            acc = _double_series(X, N, lambda k: _zfac(k - 1, k, 1 - k))
            return acc.zq() * partition_series(N)
        acc = _Terms(N)
        B = _bound(N)
        if X in ("A5", "A7"):
            for k in range(-B, B + 1):
                e = k * (3 * k + 1) // 2 if X == "A5" else k * (3 * k - 1) // 2
                acc.add(_zfac(k, k + 1, -k), e, (-1) ** (k % 2))
            return acc.zq()
        if X == "C5":
            for k in range(-B, B + 1):
                acc.add(_zfac(k - 1, k, 1 - k), k * k, (-1) ** (k % 2))
            return acc.zq()
        for k in range(1, B):
            acc.add(_zfac(k, k - 1, 1 - k), k * (k - 1) // 2, 1)
        return acc.zq() * _odd(N)

    return build


def _first_double_rhs(X: str) -> Builder:
    lead = {
        "A1": lambda N: _qq(N),
        "A3": lambda N: _qq(N),
        "C1": lambda N: _qq(N) * _odd(N),
        "E4": lambda N: eta(2, N),
    }[X]

    def build(N: int) -> ZQSeries:
        acc = _double_series(X, N, _zsym)
        return acc.zq() * partition_series(N) - _one_plus_z(ZQSeries.from_qseries(lead(N)))

    return build


def _hecke_lhs(X: str) -> Builder:
    return lambda N: _cleared(X, N) * _qq(N)


def _hecke_a1(N: int) -> ZQSeries:
    acc = _Terms(N)
    for k in range(_bound(N)):
        for n in range(-(k // 2), k // 2 + 1):
            m = abs(n)
            acc.add(_zfac(k - 2 * m, 2 * m - k + 1, 0), (k * k - k - 3 * n * n - n) // 2, (-1) ** ((n + k) % 2))
    return acc.zq()


def _hecke_a3(N: int) -> ZQSeries:
    acc = _Terms(N)
    for k in range(1, _bound(N)):
        for n in range(1, k // 2 + 1):
            acc.add(_zfac(k - 2 * n + 1, 2 * n - k, 0), (k * k - k - 3 * n * n + n) // 2, (-1) ** ((n + k) % 2))
        for n in range(0, k // 2 + 1):
            acc.add(_zfac(k - 2 * n, 2 * n - k + 1, 0), (k * k + k - 3 * n * n - n) // 2, -((-1) ** ((n + k) % 2)))
    return acc.zq()


def _hecke_c1(N: int) -> ZQSeries:
    acc = _Terms(N)
    for k in range(1, _bound(N)):
        lo = (k * k - k) // 2
        hi = (k * k + k) // 2
        for n in range(0, k // 3 + 1):
            s = (-1) ** ((n + k) % 2)
            z = _zfac(3 * n - k + 1, k - 3 * n, 0)
            acc.add(z, lo - 3 * n * n + n, s)
            acc.add(z, hi - 3 * n * n - n, -s)
        for n in range(1, k // 3 + 1):
            s = (-1) ** ((n + k) % 2)
            z = _zfac(3 * n - k, k - 3 * n + 1, 0)
            acc.add(z, lo - 3 * n * n + n, s)
            acc.add(z, hi - 3 * n * n - n, -s)
    return acc.zq()


def _hecke_e4(N: int) -> ZQSeries:
    acc = _Terms(N)
    for k in range(1, _bound(N)):
        for n in range(1, k // 2 + 1):
            acc.add(_zfac(2 * n - k, k - 2 * n + 1, 0), (k * k - k) // 2 - n * n, (-1) ** ((n + k) % 2))
        for n in range(0, k // 2 + 1):
            acc.add(_zfac(2 * n - k + 1, k - 2 * n, 0), (k * k + k) // 2 - n * n, -((-1) ** ((n + k) % 2)))
    return acc.zq()


def _zprod(parts: Sequence[tuple[int, int, int, int]], N: int, divide: Sequence[tuple[int, int, int, int]] = ()) -> ZQSeries:
    """Product of (c z^a q^start; q^step)_inf over ``parts``, divided by those in ``divide``."""
    factors = [(pochhammer(c, a, s, st, None, N), 1) for c, a, s, st in parts]
    factors += [(pochhammer(c, a, s, st, None, N), -1) for c, a, s, st in divide]
    return product(combine(*factors), N, "z")


def _cor4_lhs(X: str) -> Builder:
    if X in ("A5", "A7"):
        return lambda N: _cleared(X, N)
    return lambda N: spt_crank_series(X, N) * _zz_inf(N)


def _cor4_rhs(X: str) -> Builder:
    def build(N: int) -> ZQSeries:
        if X in ("A5", "A7"):
            p21 = _zprod([(1, 1, 2, 3), (1, -1, 1, 3), (1, 0, 3, 3)], N)
            p12 = _zprod([(1, 1, 1, 3), (1, -1, 2, 3), (1, 0, 3, 3)], N)
            first, second = (p21, p12) if X == "A5" else (p12, p21)
            return first.shift(zexp=1) + second - _one_plus_z(ZQSeries.from_qseries(_qq(N)))
        if X == "C5":
            theta = _zprod([(1, 1, 1, 2), (1, -1, 1, 2), (1, 0, 2, 2)], N)
            return theta - ZQSeries.from_qseries(_qq(N) * _neg(N).invert())
        num = _zprod([(-1, 1, 1, 1), (-1, -1, 1, 1), (1, 0, 1, 1)], N, divide=[(-1, 0, 1, 1)])
        return num - ZQSeries.from_qseries(eta(2, N))

    return build


# ---------------------------------------------------------------------------
# One-variable product identities


def _cor6_lhs(which: str) -> Builder:
    return {
        "p1": lambda N: _qq(N) ** 2,
        "p2": lambda N: _qq(N) ** 2,
        "p3": lambda N: _qq(N) ** 2 * _odd(N),
        "p4": lambda N: _qq(N) * eta(2, N),
        "p5": lambda N: _qq(N) ** 2 * _odd(N),
        "p6": lambda N: _qq(N) * eta(2, N),
    }[which]


def _cor6_rhs(which: str) -> Builder:
    inner = {"p1": "A1", "p2": "A3", "p3": "C1", "p4": "E4"}

    def build(N: int) -> QSeries:
        if which in inner:
            return _double_series(inner[which], N, lambda k: ONE).q()
        acc = _Terms(N)
        if which == "p5":
            for k in range(1, _bound(N)):
                for n in range(-((k - 1) // 3), k // 3 + 1):
                    e = (k * k - k) // 2 - 3 * n * n + n
                    s = (-1) ** ((n + k + 1) % 2)
                    acc.add(ONE, e, s)
                    acc.add(ONE, e + k, -s)
            return acc.q()
        for k in range(_bound(N)):
            for n in range(-(k // 2), k // 2 + 1):
                acc.add(ONE, (k * k + k) // 2 - n * n, (-1) ** ((n + k) % 2))
        return acc.q()

    return build


# ---------------------------------------------------------------------------
# C1 / C5 relations


def _c1_minus_c5(N: int) -> ZQSeries:
    return spt_crank_series("C1", N) - spt_crank_series("C5", N)


def _plain_at_q2(N: int) -> ZQSeries:
    return spt_crank_series("plain", N // 2 + 1).substitute_power(2, N)


def _spt_at_q2(N: int) -> QSeries:
    return spt_series("plain", N // 2 + 1).substitute_power(2, N)


# ---------------------------------------------------------------------------
# Finite identity for (1 + z)(z, 1/z; q)_n


PROP41_MAX_N = 50


def _prop41_lhs(N: int) -> list[ZQSeries]:
    out = []
    cur = _one_plus_z(ZQSeries.one(N))
    for n in range(PROP41_MAX_N + 1):
        out.append(cur)
        cur = cur.mul_binomial(1, 1, n).mul_binomial(1, -1, n)
    return out


def _shifted(poly: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(poly)
    if k < len(poly):
        out[k:] = poly[: len(poly) - k]
    return out


def _prop41_rhs(N: int) -> list[ZQSeries]:
    """Uses (q;q)_2n / ((q;q)_(n+j) (q;q)_(n-j+1)) = [2n+1, n+j]_q / (1 - q^(2n+1))."""
    one = np.zeros(N + 1, dtype=object)
    one[:] = 0
    one[0] = 1
    row = [one]  # Gaussian binomials [M, k] for k = 0..M, as truncated polynomials
    out = []
    for n in range(PROP41_MAX_N + 1):
        M = 2 * n + 1
        while len(row) - 1 < M:
            m = len(row)
            row = [one] + [row[k - 1] + _shifted(row[k], k) for k in range(1, m)] + [one]
        arr = zeros(N + 1, 2 * n + 2)
        for j in range(-n, n + 2):
            gb = row[n + j]
            sign = (-1) ** ((j + 1) % 2)
            # (1 - q^(2j-1)) q^(j(j-3)/2 + 1), split into two monomials with nonnegative exponents
            arr[:, j + n] = sign * (_shifted(gb, (j * j - 3 * j + 2) // 2) - _shifted(gb, (j * j + j) // 2))
        out.append(ZQSeries._wrap(arr, -n).div_binomial(1, 0, M))
    return out


# ---------------------------------------------------------------------------
# Rank and crank differences


def _prop5_diff_lhs(X: str) -> Builder:
    return lambda N: _times_zz(spt_crank_series(X, N))


def _prop5_diff_rhs(X: str) -> Builder:
    def build(N: int) -> ZQSeries:
        if X == "C1":
            return rank_series(N // 2 + 1).substitute_power(2, N) - crank_series(N) * _odd(N)
        if X == "C5":
            return crank_series(N // 2 + 1).substitute_power(2, N) - crank_series(N) * _odd(N)
        rank_part = r1_series(N) if X == "E2" else r2_series(N)
        return rank_part - crank_series(N) * _neg(N)

    return build


def _r2_relation_lhs(N: int) -> ZQSeries:
    return r2_series(N) * 2


def _r2_relation_rhs(N: int) -> ZQSeries:
    zz = ZQSeries.from_terms([(0, 0, 2), (1, 0, -1), (-1, 0, -1)], N)
    sym = ZQSeries.from_terms([(1, 0, 1), (-1, 0, 1)], N)
    return zz + sym * overline_rank_series(N)


# ---------------------------------------------------------------------------
# Dissections at roots of unity


def _lambert(a: Callable[[int], int], b: Callable[[int], int], N: int) -> QSeries:
    return lambert_sum(a, b, N)


def _thm5_c_lhs(X: str) -> Builder:
    return lambda N: spt_crank_at_root(X, 5, N) * (2 - _w5())


def _thm5_c1_rhs(N: int) -> QSeries:
    w = _w5()
    E = eta(50, N)
    J = lambda a, m=50: _J(a, m, N)
    q = lambda e: _mono(e, N)
    L10 = _lambert(lambda n: 75 * n * (n + 1), lambda n: 50 * n + 10, N)
    L20 = _lambert(lambda n: 75 * n * (n + 1), lambda n: 50 * n + 20, N)
    Einv = E.invert()
    return (
        E * J(20) / J(10) ** 2
        - E * J(25) / J(5, 25)
        - q(5) * E * J(5) / J(10, 25) * (2 * w)
        + q(10) * Einv * L10 * (w - 2)
        - q(6) * E * J(10) / J(20) ** 2 * w
        + q(1) * E * J(15) / J(5, 25) * 2
        - q(1) * E * J(25) / J(10, 25) * w
        - q(16) * Einv * L20 * (2 * w + 1)
        + q(2) * E / J(10)
        + q(2) * E * J(15) / J(10, 25) * (2 * w)
        + q(4) * E / J(20) * w
        - q(4) * E * J(5) / J(5, 25) * 2
    )


def _thm5_c5_rhs(N: int) -> QSeries:
    w = _w5()
    E = eta(50, N)
    J = lambda a, m=50: _J(a, m, N)
    q = lambda e: _mono(e, N)
    return (
        E * J(20) / J(10) ** 2
        - E * J(25) / J(5, 25)
        - q(5) * E * J(5) / J(10, 25) * (2 * w)
        - q(6) * E * J(10) / J(20) ** 2 * w
        + q(1) * E * J(15) / J(5, 25) * 2
        - q(1) * E * J(25) / J(10, 25) * w
        + q(2) * E / J(10) * (w - 1)
        + q(2) * E * J(15) / J(10, 25) * (2 * w)
        - q(4) * E / J(20) * (w + 1)
        - q(4) * E * J(5) / J(5, 25) * 2
    )


def _eta_quotients_3(N: int) -> tuple[QSeries, QSeries, QSeries]:
    """The three eta quotients shared by the zeta_3 dissections."""
    e3, e6, e9, e18 = eta(3, N), eta(6, N), eta(9, N), eta(18, N)
    a = e9 ** 4 * e6 / (e18 ** 2 * e3 ** 2)
    b = _mono(1, N) * e18 * e9 / e3
    c = _mono(2, N) * e18 ** 4 / (e9 ** 2 * e6)
    return a, b, c


def _lambert_9(N: int) -> QSeries:
    """q^2 (q^18;q^18)_inf / (q^9;q^9)_inf^2 * sum (-1)^n q^(9n^2+9n) / (1 - q^(9n+3))."""
    L = _lambert(lambda n: 9 * n * n + 9 * n, lambda n: 9 * n + 3, N)
    return _mono(2, N) * eta(18, N) / eta(9, N) ** 2 * L


def _thm5_e2_rhs(N: int) -> QSeries:
    _, b, c = _eta_quotients_3(N)
    return c * 2 - b


def _thm5_e4_lhs(N: int) -> QSeries:
    return spt_crank_at_root("E4", 3, N) * 2


def _thm5_e4_rhs(N: int) -> QSeries:
    a, _, _ = _eta_quotients_3(N)
    return 1 - a + _lambert_9(N) * 2


def _a5_zeta7_rhs(N: int) -> QSeries:
    z = lambda *k, const=0: _zeta(7, *k, const=const)
    J49 = lambda *a: _Jprod(a, 49, N)
    J147 = lambda *a: _Jprod(a, 147, N)
    q = lambda e: _mono(e, N)
    body = (
        q(14) / J147(42, 49, 56) * (-z(1, 6, const=1))
        + q(2) * J49(14) / J49(7, 21)
        - q(9) / J147(21, 49, 70) * z(2, 5, const=1)
        + q(3) / J49(14) * z(1, 6)
        + q(4) / J49(21) * z(1, 2, 5, 6, const=1)
        + q(5) * J147(35) / J147(21, 28, 49, 49) * z(1, 6)
        + q(19) * J147(14) / J147(21, 49, 49, 70) * z(1, 6)
        + q(6) / J147(14, 49, 63) * z(2, 5, const=2)
    )
    return eta(49, N) * body


def _a1_zeta3_lhs(N: int) -> QSeries:
    return spt_crank_at_root("A1", 3, N) * (_zeta(3, 1, const=1) * 3)


def _a1_zeta3_rhs(N: int) -> QSeries:
    acc = _double_series("A1", N, lambda k: _zfac(k - 1, k, 1 - k))
    return acc.at_root(3) / eta(3, N)


# ---------------------------------------------------------------------------
# Rank and crank dissections


def _rank5_lhs(N: int) -> QSeries:
    return rank_series(N, at=5)


def _rank5_rhs(N: int) -> QSeries:
    w = _w5()
    E = eta(25, N)
    J = lambda a: _J(a, 25, N)
    q = lambda e: _mono(e, N)
    L5 = _lambert(lambda n: 75 * n * (n + 1) // 2, lambda n: 25 * n + 5, N)
    L10 = _lambert(lambda n: 75 * n * (n + 1) // 2, lambda n: 25 * n + 10, N)
    return (
        E * J(10) / J(5) ** 2
        + q(5) / E * L5 * (w - 2)
        + q(1) * E / J(5)
        + q(2) * E / J(10) * w
        - q(3) * E * J(5) / J(10) ** 2 * w
        - q(8) / E * L10 * (2 * w + 1)
    )


def _crank5_lhs(N: int) -> QSeries:
    return crank_series(N, at=5)


def _crank5_rhs(N: int) -> QSeries:
    w = _w5()
    J = lambda a: _J(a, 25, N)
    q = lambda e: _mono(e, N)
    body = J(10) / J(5) ** 2 + q(1) / J(5) * (w - 1) - q(2) / J(10) * (w + 1) - q(3) * J(5) / J(10) ** 2 * w
    return eta(25, N) * body


def _crank7_lhs(N: int) -> QSeries:
    return crank_series(N, at=7)


def _crank7_rhs(N: int) -> QSeries:
    z = lambda *k, const=0: _zeta(7, *k, const=const)
    J = lambda *a: _Jprod(a, 49, N)
    q = lambda e: _mono(e, N)
    body = (
        J(21) / J(7, 14)
        + q(1) / J(7) * z(1, 6, const=-1)
        + q(2) * J(14) / J(7, 21) * z(2, 5)
        + q(3) / J(14) * z(3, 4, const=1)
        - q(4) / J(21) * z(1, 6)
        - q(6) * J(7) / J(14, 21) * z(2, 5, const=1)
    )
    return eta(49, N) * body


def _r1_zeta3_lhs(N: int) -> QSeries:
    return r1_series(N, at=3)


def _r1_zeta3_rhs(N: int) -> QSeries:
    a, b, c = _eta_quotients_3(N)
    return a - b * 4 + c * 4


def _r2_zeta3_lhs(N: int) -> QSeries:
    return r2_series(N, at=3) * 2


def _r2_zeta3_rhs(N: int) -> QSeries:
    a, b, c = _eta_quotients_3(N)
    return 3 - a - b * 2 - c * 4 + _lambert_9(N) * 6


def _odd_crank5_lhs(N: int) -> QSeries:
    return crank_series(N, at=5) * _odd(N)


def _odd_crank5_rhs(N: int) -> QSeries:
    w = _w5()
    J = lambda a, m=50: _J(a, m, N)
    q = lambda e: _mono(e, N)
    body = (
        J(25) / J(5, 25)
        + q(5) * J(5) / J(10, 25) * (2 * w)
        - q(1) * J(15) / J(5, 25) * 2
        + q(1) * J(25) / J(10, 25) * w
        - q(2) * J(15) / J(10, 25) * (2 * w)
        + q(4) * J(5) / J(5, 25) * 2
    )
    return eta(50, N) * body


def _neg_crank3_lhs(N: int) -> QSeries:
    return crank_series(N, at=3) * _neg(N)


def _neg_crank3_rhs(N: int) -> QSeries:
    a, b, c = _eta_quotients_3(N)
    return a - b - c * 2


def _overline_rank3_lhs(N: int) -> QSeries:
    return overline_rank_series(N, at=3)


def _overline_rank3_rhs(N: int) -> QSeries:
    a, b, c = _eta_quotients_3(N)
    return a + b * 2 + c * 4 - _lambert_9(N) * 6


# ---------------------------------------------------------------------------
# Auxiliary product identities


def _odd_eta5_lhs(N: int) -> QSeries:
    return _odd(N) * _qq(N)


def _odd_eta5_rhs(N: int) -> QSeries:
    J = lambda a: _J(a, 50, N)
    return eta(50, N) * (J(25) - _mono(1, N) * J(15) * 2 + _mono(4, N) * J(5) * 2)


def _crank_zeta5_lhs(N: int) -> QSeries:
    return product(combine((pochhammer(1, 1, 1, 1, None, N), -1), (pochhammer(1, -1, 1, 1, None, N), -1)), N, 5)


def _crank_zeta5_rhs(N: int) -> QSeries:
    return _J(5, 25, N).invert() + _mono(1, N) / _J(10, 25, N) * _w5()


def _a5_zeta5_lhs(N: int) -> QSeries:
    return spt_crank_at_root("A5", 5, N) * (CycInt(5, {0: 1, 1: 1}) * (2 - _w5()))


def _a5_zeta5_rhs(N: int) -> QSeries:
    acc = _Terms(N)
    B = _bound(N)
    for k in range(-B, B + 1):
        acc.add(_zfac(k, k + 1, -k), k * (3 * k + 1) // 2, (-1) ** (k % 2))
    theta = acc.at_root(5)
    return theta / _J(5, 25, N) + theta * _mono(1, N) / _J(10, 25, N) * _w5()


def _odd_product5_lhs(N: int) -> QSeries:
    return _odd(N)


def _odd_product5_rhs(N: int) -> QSeries:
    e5, e10, e25, e50 = eta(5, N), eta(10, N), eta(25, N), eta(50, N)
    J5, J15 = _J(5, 50, N), _J(15, 50, N)
    q = lambda e: _mono(e, N)
    d3 = e10.invert() ** 3
    return (
        e5 * e25 ** 2 * J15 * d3
        - q(1) * e5 * e50 ** 2 * J15 ** 2 * d3
        - q(7) * e5 * e50 ** 2 * J5 ** 2 * d3
        - q(3) * e5 * e25 ** 2 * J5 * d3
        + q(4) * e5 ** 2 * e50 ** 3 / (e10 ** 4 * e25)
    )


def _pentagonal49_lhs(N: int) -> QSeries:
    return _qq(N)


def _pentagonal49_rhs(N: int) -> QSeries:
    J = lambda a: _J(a, 49, N)
    q = lambda e: _mono(e, N)
    return eta(49, N) * (J(14) / J(7) - q(1) * J(21) / J(14) - q(2) + q(5) * J(7) / J(21))


def _sptbar_lhs(N: int) -> QSeries:
    return spt_series("E4", N) * 2


def _sptbar_rhs(N: int) -> QSeries:
    return spt_series("bar", N) * 2 - (overpartition_series(N) - 1)


# ---------------------------------------------------------------------------
# Registry


def _build_registry() -> dict[str, IdentityCase]:
    cases: list[IdentityCase] = []

    def add(id, description, lhs, rhs, order, tags, vanishing=None, vanishing_order=None):
        group = id.split(".")[0]
        cases.append(IdentityCase(id, description, lhs, rhs, order, (group,) + tuple(tags), vanishing, vanishing_order))

    add(
        "eqintro1",
        "(1-z)(1-1/z) S(z,q) = R(z,q) - C(z,q)",
        _eqintro1_lhs,
        _eqintro1_rhs,
        BIVARIATE_ORDER,
        ["bivariate"],
    )
    for X in FAMILIES:
        add(
            f"firstforms.{X.lower()}",
            f"S_{X}: sum over (z q^n, q^n/z; q)_inf form equals the (z, 1/z; q)_n form",
            _first_form_lhs(X),
            _first_form_rhs(X),
            BIVARIATE_ORDER,
            ["bivariate"],
        )
    for X in FAMILIES:
        add(
            f"thm2.{X.lower()}",
            f"(1+z)(z,1/z;q)_inf S_{X}(z,q) as a single or double theta-type sum",
            lambda N, X=X: _cleared(X, N),
            _thm2_rhs(X),
            BIVARIATE_ORDER,
            ["bivariate"],
        )
    for X, rhs in (("A1", _hecke_a1), ("A3", _hecke_a3), ("C1", _hecke_c1), ("E4", _hecke_e4)):
        add(
            f"cor3.{X.lower()}",
            f"(1+z)(z,1/z,q;q)_inf S_{X}(z,q) as an indefinite (Hecke-type) double sum",
            _hecke_lhs(X),
            rhs,
            BIVARIATE_ORDER,
            ["bivariate", "hecke"],
        )
    for X in ("A5", "A7", "C5", "E2"):
        add(
            f"cor4.{X.lower()}",
            f"S_{X}(z,q) as a combination of infinite products",
            _cor4_lhs(X),
            _cor4_rhs(X),
            PRODUCT_ORDER,
            ["bivariate", "product"],
        )
    for which in ("p1", "p2", "p3", "p4", "p5", "p6"):
        add(
            f"cor6.{which}",
            "one-variable product = double sum",
            _cor6_lhs(which),
            _cor6_rhs(which),
            PRODUCT_ORDER,
            ["product"],
        )
    add(
        "cor7.ns_even",
        "N_S(m,n) = M_C1(m,2n) - M_C5(m,2n)",
        lambda N: _c1_minus_c5(N).residue_part(2, 0),
        _plain_at_q2,
        600,
        ["bivariate"],
    )
    add(
        "cor7.m_odd",
        "M_C1(m,2n+1) = M_C5(m,2n+1)",
        lambda N: spt_crank_series("C1", N).residue_part(2, 1),
        lambda N: spt_crank_series("C5", N).residue_part(2, 1),
        600,
        ["bivariate"],
    )
    add(
        "cor7.spt_even",
        "spt(n) = spt_C1(2n) - spt_C5(2n)",
        lambda N: (spt_series("C1", N) - spt_series("C5", N)).residue_part(2, 0),
        _spt_at_q2,
        600,
        [],
    )
    add(
        "cor7.spt_odd",
        "spt_C1(2n+1) = spt_C5(2n+1)",
        lambda N: spt_series("C1", N).residue_part(2, 1),
        lambda N: spt_series("C5", N).residue_part(2, 1),
        600,
        [],
    )
    add(
        "prop41",
        f"(1+z)(z,1/z;q)_n as a finite bilateral sum, 0 <= n <= {PROP41_MAX_N}",
        _prop41_lhs,
        _prop41_rhs,
        BIVARIATE_ORDER,
        ["bivariate"],
    )
    for X in ("A1", "A3", "C1", "E4"):
        add(
            f"prop31.first.{X.lower()}",
            f"(1+z)(z,1/z;q)_inf S_{X}(z,q) with symmetric z^k + z^(1-k) weights",
            lambda N, X=X: _cleared(X, N),
            _first_double_rhs(X),
            BIVARIATE_ORDER,
            ["bivariate"],
        )
    add(
        "thm5.c1",
        "5-dissection of (1-zeta5)(1-1/zeta5) S_C1(zeta5,q)",
        _thm5_c_lhs("C1"),
        _thm5_c1_rhs,
        DISSECTION_ORDER,
        ["dissection"],
        (5, 3),
    )
    add(
        "thm5.c5",
        "5-dissection of (1-zeta5)(1-1/zeta5) S_C5(zeta5,q)",
        _thm5_c_lhs("C5"),
        _thm5_c5_rhs,
        DISSECTION_ORDER,
        ["dissection"],
        (5, 3),
    )
    add(
        "thm5.e2",
        "3-dissection of S_E2(zeta3,q)",
        lambda N: spt_crank_at_root("E2", 3, N),
        _thm5_e2_rhs,
        DISSECTION_ORDER,
        ["dissection"],
        (3, 0),
    )
    add(
        "thm5.e4",
        "3-dissection of 2 S_E4(zeta3,q)",
        _thm5_e4_lhs,
        _thm5_e4_rhs,
        DISSECTION_ORDER,
        ["dissection"],
        (3, 1),
    )
    add(
        "sec4.a5zeta7",
        "7-dissection of S_A5(zeta7,q)",
        lambda N: spt_crank_at_root("A5", 7, N),
        _a5_zeta7_rhs,
        300,
        ["dissection"],
        (7, 1),
        700,
    )
    add(
        "sec4.a1zeta3",
        "3(1+zeta3) S_A1(zeta3,q) from the double sum at z = zeta3",
        _a1_zeta3_lhs,
        _a1_zeta3_rhs,
        DISSECTION_ORDER,
        ["dissection"],
        (3, 0),
    )
    for X in ("C1", "C5", "E2", "E4"):
        add(
            f"prop5.diff.{X.lower()}",
            f"(1-z)(1-1/z) S_{X}(z,q) as a rank-type minus a crank-type series",
            _prop5_diff_lhs(X),
            _prop5_diff_rhs(X),
            BIVARIATE_ORDER,
            ["bivariate"],
        )
    for id, desc, lhs, rhs in (
        ("prop5.diss.rank5", "5-dissection of R(zeta5,q)", _rank5_lhs, _rank5_rhs),
        ("prop5.diss.crank5", "5-dissection of C(zeta5,q)", _crank5_lhs, _crank5_rhs),
        ("prop5.diss.r1zeta3", "3-dissection of R1(zeta3,q)", _r1_zeta3_lhs, _r1_zeta3_rhs),
        ("prop5.diss.r2zeta3", "3-dissection of 2 R2(zeta3,q)", _r2_zeta3_lhs, _r2_zeta3_rhs),
        ("prop5.diss.oddcrank5", "5-dissection of (q;q^2)_inf C(zeta5,q)", _odd_crank5_lhs, _odd_crank5_rhs),
        ("prop5.diss.negcrank3", "3-dissection of (-q;q)_inf C(zeta3,q)", _neg_crank3_lhs, _neg_crank3_rhs),
    ):
        add(id, desc, lhs, rhs, DISSECTION_ORDER, ["dissection"])
    add(
        "aux.r2relation",
        "2 R2(z,q) = (1-z)(1-1/z) + (z+1/z) Rbar(z,q)",
        _r2_relation_lhs,
        _r2_relation_rhs,
        BIVARIATE_ORDER,
        ["bivariate"],
    )
    add("aux.gauss", "(q;q^2)_inf (q;q)_inf 5-dissected", _odd_eta5_lhs, _odd_eta5_rhs, DISSECTION_ORDER, ["dissection"])
    add(
        "aux.lemma39",
        "1/(zeta5 q, q/zeta5; q)_inf 5-dissected",
        _crank_zeta5_lhs,
        _crank_zeta5_rhs,
        DISSECTION_ORDER,
        ["dissection"],
    )
    add(
        "aux.lemma39.a5",
        "(1+zeta5)(1-zeta5)(1-1/zeta5) S_A5(zeta5,q) as the dissected crank factor times a theta sum",
        _a5_zeta5_lhs,
        _a5_zeta5_rhs,
        DISSECTION_ORDER,
        ["dissection"],
        (5, 4),
    )
    add("aux.rodseth", "(q;q^2)_inf 5-dissected", _odd_product5_lhs, _odd_product5_rhs, DISSECTION_ORDER, ["dissection"])
    add(
        "aux.lo1",
        "3-dissection of the overpartition rank Rbar(zeta3,q)",
        _overline_rank3_lhs,
        _overline_rank3_rhs,
        DISSECTION_ORDER,
        ["dissection"],
    )
    add(
        "aux.pentagonal49",
        "(q;q)_inf 7-dissected",
        _pentagonal49_lhs,
        _pentagonal49_rhs,
        DISSECTION_ORDER,
        ["dissection"],
    )
    add("aux.crank7", "7-dissection of C(zeta7,q)", _crank7_lhs, _crank7_rhs, DISSECTION_ORDER, ["dissection"])
    add(
        "e4.sptbar",
        "2 S_E4(q) = 2 Sbar(q) - ((-q;q)_inf/(q;q)_inf - 1)",
        _sptbar_lhs,
        _sptbar_rhs,
        PRODUCT_ORDER,
        ["product"],
    )
    return {c.id: c for c in cases}


REGISTRY: dict[str, IdentityCase] = _build_registry()


def get_case(id: str) -> IdentityCase:
    try:
        return REGISTRY[id]
    except KeyError:
        raise KeyError(f"unknown identity {id!r}") from None


def matches(case: IdentityCase, filt: str | None) -> bool:
    if not filt:
        return True
    return filt in case.tags or case.id == filt or case.id.startswith(filt + ".")


def select(filt: str | None = None) -> list[IdentityCase]:
    return [c for c in REGISTRY.values() if matches(c, filt)]


# ---------------------------------------------------------------------------
# Verification


def _compare(lhs, rhs, order: int) -> tuple[int | None, str]:
    if isinstance(lhs, (list, tuple)):
        if len(lhs) != len(rhs):
            return 0, "component count differs"
        for i, (a, b) in enumerate(zip(lhs, rhs)):
            m, _ = _compare(a, b, order)
            if m is not None:
                return m, f"component {i}"
        return None, ""
    for side in (lhs, rhs):
        if side.order < order:
            raise ValueError(f"builder returned order {side.order} < requested {order}")
    if isinstance(lhs, ZQSeries) or isinstance(rhs, ZQSeries):
        if not (isinstance(lhs, ZQSeries) and isinstance(rhs, ZQSeries)):
            return 0, "one side is two-variable, the other is not"
        return zq_first_mismatch(lhs.truncate(order), rhs.truncate(order)), ""
    return first_mismatch(lhs.truncate(order), rhs.truncate(order)), ""


def _progression_hits(series, modulus: int, residue: int, order: int) -> list[int]:
    arr = series.array
    return [n for n in range(residue % modulus, order + 1, modulus) if np.any(arr[n] != 0)]


def verify(case: str | IdentityCase, order: int | None = None) -> VerifyReport:
    """Check one identity to q^order (the case default when order is None)."""
    if isinstance(case, str):
        case = get_case(case)
    N = case.default_order if order is None else order
    if N < 0:
        raise ValueError("order must be nonnegative")
    start = time.perf_counter()
    lhs = case.lhs_builder(N)
    rhs = case.rhs_builder(N)
    mismatch, detail = _compare(lhs, rhs, N)
    failures = None
    if case.vanishing is not None:
        t, r = case.vanishing
        v_order = max(N, case.vanishing_order or N)
        side = rhs if v_order == N else case.rhs_builder(v_order)
        failures = _progression_hits(side, t, r, v_order)
    passed = mismatch is None and not failures
    return VerifyReport(case.id, passed, N, mismatch, time.perf_counter() - start, failures, detail)


def verify_all(filt: str | None = None, order: int | None = None) -> SuiteReport:
    return SuiteReport([verify(c, order) for c in select(filt)])
