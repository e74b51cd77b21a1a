"""spt-crank-type series, their z = 1 specializations, and the rank/crank family.

Every two-variable series here is a sum of terms

    coef * q^e(n) * (numerator products) / (z q^n, q^n / z; q)_inf

handed to the summation engine in :mod:`._sums`.  The same term list can be
evaluated as a genuine two-variable series, or directly at z = zeta_p, which
is much cheaper at high order.  The one-variable spt series are built from
their own z = 1 product forms, not by specializing the two-variable ones.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterator

from ._sums import Factor, Term, combine, pochhammer, product, sum_terms
from .qseries import QMonomial, QSeries, poch_infinite
from .zqseries import ZQSeries

FAMILIES = ("A1", "A3", "A5", "A7", "C1", "C5", "E2", "E4")
EXTRA_KINDS = ("plain", "bar", "M2")


@dataclass(frozen=True)
class SptFamily:
    tag: str
    pair: str
    prefactor: str
    min_exponent: Callable[[int], int]
    sign: Callable[[int], int] = lambda n: 1


def _one(n: int) -> int:
    return 1


SPT_FAMILIES: dict[str, SptFamily] = {
    "A1": SptFamily("A1", "A1", "(q;q)_inf", lambda n: n),
    "A3": SptFamily("A3", "A3", "(q;q)_inf", lambda n: 2 * n),
    "A5": SptFamily("A5", "A5", "(q;q)_inf", lambda n: n * n + n),
    "A7": SptFamily("A7", "A7", "(q;q)_inf", lambda n: n * n),
    "C1": SptFamily("C1", "C1", "(q;q^2)_inf (q;q)_inf", lambda n: n),
    "C5": SptFamily("C5", "C5", "(q;q^2)_inf (q;q)_inf", lambda n: (n * n + n) // 2),
    "E2": SptFamily("E2", "E2", "(q^2;q^2)_inf", lambda n: n, lambda n: (-1) ** n),
    "E4": SptFamily("E4", "E4", "(q^2;q^2)_inf", lambda n: 2 * n),
}

# (family, modulus, residue): spt_X(t n + r) == 0 (mod t), and the q^(t n + r)
# coefficients of S_X(zeta_t, q) vanish.
CONGRUENCES: tuple[tuple[str, int, int], ...] = (
    ("A1", 3, 0),
    ("A3", 3, 1),
    ("A3", 5, 1),
    ("A5", 5, 4),
    ("A5", 7, 1),
    ("A7", 5, 4),
    ("C1", 5, 3),
    ("C5", 5, 3),
    ("E2", 3, 0),
    ("E4", 3, 1),
)


def _check_kind(X: str, allow_extra: bool = True) -> None:
    if X not in FAMILIES and not (allow_extra and X in EXTRA_KINDS):
        known = FAMILIES + (EXTRA_KINDS if allow_extra else ())
        raise KeyError(f"unknown spt family {X!r}; known: {', '.join(known)}")


def _kernel(n: int, L: int, step: int = 1) -> dict[Factor, int]:
    """Factors of 1/(z q^n, q^n / z; q^step)_inf."""
    return combine((pochhammer(1, 1, n, step, None, L), -1), (pochhammer(1, -1, n, step, None, L), -1))


# ---------------------------------------------------------------------------
# Term lists


def crank_terms(X: str, order: int) -> Iterator[Term]:
    """Summands of S_X(z, q) in the form with (z q^n, q^n / z; q)_inf downstairs."""
    _check_kind(X)
    n = 1
    while True:
        if X in SPT_FAMILIES:
            fam = SPT_FAMILIES[X]
            e, sign = fam.min_exponent(n), fam.sign(n)
        elif X == "M2":
            e, sign = 2 * n, 1
        else:
            e, sign = n, 1
        if e > order:
            return
        yield Term(sign, e, _crank_factors(X, n))
        n += 1


def _crank_factors(X: str, n: int) -> Callable[[int], dict[Factor, int]]:
    group = X[0] if X in SPT_FAMILIES else X

    def factors(L: int) -> dict[Factor, int]:
        if group == "A":
            num = pochhammer(1, 0, 2 * n + 1, 1, None, L)
            return combine((num, 1), (_kernel(n, L), 1))
        if group == "C":
            num = combine((pochhammer(1, 0, 2 * n + 1, 2, None, L), 1), (pochhammer(1, 0, n + 1, 1, None, L), 1))
            return combine((num, 1), (_kernel(n, L), 1))
        if group == "E":
            return combine((pochhammer(1, 0, 2 * n + 2, 2, None, L), 1), (_kernel(n, L), 1))
        if group == "plain":
            return combine((pochhammer(1, 0, n + 1, 1, None, L), 1), (_kernel(n, L), 1))
        if group == "bar":
            num = combine((pochhammer(-1, 0, n + 1, 1, None, L), 1), (pochhammer(1, 0, n + 1, 1, None, L), 1))
            return combine((num, 1), (_kernel(n, L), 1))
        # M2: q^(2n) (-q^(2n+1), q^(2n+2); q^2)_inf / (z q^(2n), q^(2n) / z; q^2)_inf
        num = combine((pochhammer(-1, 0, 2 * n + 1, 2, None, L), 1), (pochhammer(1, 0, 2 * n + 2, 2, None, L), 1))
        return combine((num, 1), (_kernel(2 * n, L, step=2), 1))

    return factors


def spt_terms(X: str, order: int) -> Iterator[Term]:
    """Summands of the z = 1 series in the (1 - q^n)^2 form."""
    _check_kind(X)
    n = 1
    while True:
        if X in SPT_FAMILIES:
            fam = SPT_FAMILIES[X]
            e, sign = fam.min_exponent(n), fam.sign(n)
        elif X == "M2":
            e, sign = 2 * n, 1
        else:
            e, sign = n, 1
        if e > order:
            return
        yield Term(sign, e, _spt_factors(X, n))
        n += 1


def _spt_factors(X: str, n: int) -> Callable[[int], dict[Factor, int]]:
    group = X[0] if X in SPT_FAMILIES else X

    def factors(L: int) -> dict[Factor, int]:
        sq = {(1, 0, n): 2} if n <= L else {}
        if group == "A":
            den = combine((sq, 1), (pochhammer(1, 0, n + 1, 1, None, L), 1), (pochhammer(1, 0, n + 1, 1, n, L), 1))
            return combine((den, -1))
        if group == "C":
            den = combine((sq, 1), (pochhammer(1, 0, n + 1, 1, n, L), 1), (pochhammer(1, 0, 2 * n + 2, 2, None, L), 1))
            return combine((den, -1))
        if group in ("E", "bar"):
            return combine((pochhammer(-1, 0, n + 1, 1, None, L), 1), (sq, -1), (pochhammer(1, 0, n + 1, 1, None, L), -1))
        if group == "plain":
            return combine((sq, -1), (pochhammer(1, 0, n + 1, 1, None, L), -1))
        sq2 = {(1, 0, 2 * n): 2} if 2 * n <= L else {}
        return combine(
            (pochhammer(-1, 0, 2 * n + 1, 2, None, L), 1), (sq2, -1), (pochhammer(1, 0, 2 * n + 2, 2, None, L), -1)
        )

    return factors


# ---------------------------------------------------------------------------
# Cache


class _SeriesCache:
    """Write-once cache; a stored series of higher order serves lower orders."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict[tuple, object] = {}

    def get(self, key: tuple, order: int, build: Callable[[int], object]):
        with self._lock:
            hit = self._data.get(key)
        if hit is not None and hit.order >= order:
            return hit if hit.order == order else hit.truncate(order)
        value = build(order)
        with self._lock:
            cur = self._data.get(key)
            if cur is None or cur.order < value.order:
                self._data[key] = value
        return value

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


_CACHE = _SeriesCache()


def clear_cache() -> None:
    _CACHE.clear()


# ---------------------------------------------------------------------------
# The spt-crank-type functions


def spt_crank_series(X: str, order: int) -> ZQSeries:
    """S_X(z, q) to the given order, as a two-variable series.

    ``X`` is one of the eight families, or ``plain``/``bar``/``M2`` for the
    original spt-crank and its overpartition and M2 analogues.
    """
    _check_kind(X)
    if order < 1:
        raise ValueError("order must be at least 1")
    return _CACHE.get(("crank", X), order, lambda N: sum_terms(crank_terms(X, N), N, "z"))


def spt_crank_at_root(X: str, p: int, order: int) -> QSeries:
    """S_X(zeta_p, q) computed directly over Z[zeta_p] from the same summands."""
    _check_kind(X)
    return _CACHE.get(("root", X, p), order, lambda N: sum_terms(crank_terms(X, N), N, p))


def spt_series(X: str, order: int) -> QSeries:
    """sum spt_X(n) q^n from the one-variable product form."""
    _check_kind(X)
    if order < 1:
        raise ValueError("order must be at least 1")
    return _CACHE.get(("spt", X), order, lambda N: sum_terms(spt_terms(X, N), N, 1))


def m_coeff(X: str, m: int, n: int, order: int | None = None) -> int:
    """M_X(m, n): coefficient of z^m q^n in S_X(z, q)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return spt_crank_series(X, max(order or 0, n, 1)).extract(m, n)


def m_residue(X: str, k: int, t: int, n: int, order: int | None = None) -> int:
    """M_X(k, t, n) = sum of M_X(m, n) over m == k (mod t)."""
    s = spt_crank_series(X, max(order or 0, n, 1))
    poly = s.coefficient(n)
    return sum(c for m, c in poly.items() if (m - k) % t == 0)


def m_residues(X: str, t: int, n: int, order: int | None = None) -> list[int]:
    s = spt_crank_series(X, max(order or 0, n, 1))
    out = [0] * t
    for m, c in s.coefficient(n).items():
        out[m % t] += c
    return out


@dataclass
class CongruenceReport:
    family: str
    modulus: int
    residue: int
    n_max: int
    checked: list[int] = field(default_factory=list)
    mod_failures: list[int] = field(default_factory=list)
    root_failures: list[int] | None = None
    root_note: str = ""

    @property
    def mod_passed(self) -> bool:
        return not self.mod_failures

    @property
    def root_passed(self) -> bool | None:
        return None if self.root_failures is None else not self.root_failures

    @property
    def passed(self) -> bool:
        return self.mod_passed and self.root_passed is not False

    @property
    def witness(self) -> int | None:
        fails = sorted(set(self.mod_failures) | set(self.root_failures or []))
        return fails[0] if fails else None

    @property
    def equal_residue_classes(self) -> bool | None:
        """All M_X(k, t, n) agree on the progression (implied by root vanishing)."""
        return self.root_passed


def congruence_check(X: str, t: int, r: int, n_max: int) -> CongruenceReport:
    """Test spt_X(t n + r) == 0 (mod t) and the matching root-of-unity vanishing for t n + r <= n_max."""
    _check_kind(X)
    if t < 2:
        raise ValueError("modulus must be at least 2")
    r %= t
    report = CongruenceReport(X, t, r, n_max)
    report.checked = [n for n in range(r, n_max + 1, t) if n >= 1]
    if not report.checked:
        report.root_failures = [] if t in (3, 5, 7) else None
        return report
    series = spt_series(X, n_max)
    report.mod_failures = [n for n in report.checked if series[n] % t]
    if t in (3, 5, 7):
        at_root = spt_crank_at_root(X, t, n_max)
        report.root_failures = [n for n in report.checked if any(at_root.array[n])]
    else:
        report.root_note = f"no cyclotomic ring for modulus {t}; root-of-unity verdict skipped"
    return report


def root_vanishing(X: str, t: int, r: int, order: int) -> list[int]:
    """Exponents n == r (mod t), n <= order, where S_X(zeta_t, q) has a nonzero coefficient."""
    at_root = spt_crank_at_root(X, t, order)
    return [n for n in range(r % t, order + 1, t) if any(at_root.array[n])]


# ---------------------------------------------------------------------------
# Rank and crank family


def _rank_like(order: int, at, weight: Callable[[int], list[tuple[int, int]]], prefactor: QSeries):
    """prefactor * (1 + sum_{n>=1} sum_(e,c) c q^e (1-z)(1-1/z) / ((1 - z q^n)(1 - q^n / z)))."""

    def terms():
        yield Term(1, 0, lambda L: {})
        n = 1
        while True:
            monos = weight(n)
            if min(e for e, _ in monos) > order:
                return
            kernel = {(1, 1, 0): 1, (1, -1, 0): 1, (1, 1, n): -1, (1, -1, n): -1}
            for e, c in monos:
                yield Term(c, e, lambda L, k=kernel: k)
            n += 1

    return sum_terms(terms(), order, at) * prefactor


def _q_inf(order: int) -> QSeries:
    return poch_infinite(QMonomial(1, 1), 1, order)


def _overpartition_factor(order: int) -> QSeries:
    """(-q;q)_inf / (q;q)_inf."""
    return poch_infinite(QMonomial(-1, 1), 1, order) * _q_inf(order).invert()


def rank_series(order: int, at="z"):
    """R(z, q), generating function of N(m, n)."""
    return _rank_like(
        order,
        at,
        lambda n: [(n * (3 * n + 1) // 2, (-1) ** n), (n * (3 * n + 1) // 2 + n, (-1) ** n)],
        _q_inf(order).invert(),
    )


def crank_series(order: int, at="z"):
    """C(z, q) = (q;q)_inf / (zq, q/z; q)_inf."""
    factors = combine(
        (pochhammer(1, 0, 1, 1, None, order), 1),
        (pochhammer(1, 1, 1, 1, None, order), -1),
        (pochhammer(1, -1, 1, 1, None, order), -1),
    )
    return product(factors, order, at)


def crank_series_lambert(order: int, at="z"):
    """C(z, q) from its Lambert-type sum; agrees with :func:`crank_series`."""
    return _rank_like(
        order,
        at,
        lambda n: [(n * (n + 1) // 2, (-1) ** n), (n * (n + 1) // 2 + n, (-1) ** n)],
        _q_inf(order).invert(),
    )


def r1_series(order: int, at="z"):
    return _rank_like(order, at, lambda n: [(n, 2 * (-1) ** n)], _overpartition_factor(order))


def r2_series(order: int, at="z"):
    return _rank_like(
        order,
        at,
        lambda n: [(n * n, (-1) ** n), (n * n + 2 * n, (-1) ** n)],
        _overpartition_factor(order),
    )


def overline_rank_series(order: int, at="z"):
    """Overpartition Dyson-rank generating function."""
    return _rank_like(order, at, lambda n: [(n * n + n, 2 * (-1) ** n)], _overpartition_factor(order))


def residual_crank_series(kind: str, order: int, at="z"):
    """(-q;q)_inf C(z,q) for kind 'overpartition', (q;q^2)_inf C(z,q) for kind 'odd'."""
    if kind == "overpartition":
        pre = poch_infinite(QMonomial(-1, 1), 1, order)
    elif kind == "odd":
        pre = poch_infinite(QMonomial(1, 1), 2, order)
    else:
        raise ValueError(f"unknown residual crank {kind!r}; use 'overpartition' or 'odd'")
    return crank_series(order, at) * pre


def overpartition_series(order: int) -> QSeries:
    """sum pbar(n) q^n = (-q;q)_inf / (q;q)_inf."""
    return _overpartition_factor(order)
