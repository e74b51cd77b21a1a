"""Sums of hypergeometric-type terms, evaluated by forward ratios.

A term is  coef * z^zexp * q^qexp * prod (1 - c z^a q^e)^mult  where the
product runs over a finite multiset of binomial factors (mult < 0 puts the
factor in the denominator; e = 0 is allowed only in numerators).  Consecutive
terms of a q-series sum usually share almost all of their factors, so the
engine keeps the running product and only applies the factors that changed.

The same term list can be evaluated at z = 1, at z = zeta_p, or kept as a
two-variable series, which is how the z = 1 and root-of-unity series stay
tied to the same formula while still being computed independently of the
bivariate expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping


from .qseries import QSeries, scale_rows, zeros
from .ring import CycInt
from .zqseries import ZQSeries

Factor = tuple[int, int, int]  # (c, a, e) meaning 1 - c z^a q^e
FactorFn = Callable[[int], Mapping[Factor, int]]


@dataclass(frozen=True)
class Term:
    """One summand.  ``factors(L)`` must list every factor with e <= L."""

    coef: int
    qexp: int
    factors: FactorFn
    zexp: int = 0


def pochhammer(c: int, a: int, start: int, step: int, count: int | None, limit: int) -> dict[Factor, int]:
    """Factors of (c z^a q^start; q^step)_count (count None means infinite), e <= limit."""
    out: dict[Factor, int] = {}
    j = 0
    e = start
    while e <= limit and (count is None or j < count):
        key = (c, a, e)
        out[key] = out.get(key, 0) + 1
        j += 1
        e += step
    return out


def combine(*parts: tuple[Mapping[Factor, int], int]) -> dict[Factor, int]:
    """Sum of multisets, each scaled by an integer multiplicity."""
    out: dict[Factor, int] = {}
    for factors, mult in parts:
        for key, m in factors.items():
            out[key] = out.get(key, 0) + m * mult
    return {k: m for k, m in out.items() if m}


# ---------------------------------------------------------------------------
# Targets: how factors act in each coefficient ring


class _UnivariateTarget:
    def __init__(self, order: int, root: int):
        self.order = order
        self.root = root
        width = 1 if root == 1 else root - 1
        self.acc = zeros(order + 1, width)

    def scalar(self, c: int, a: int):
        if self.root == 1:
            return c
        return CycInt(self.root, {a: c})

    def one(self, length: int) -> QSeries:
        return QSeries.one(length, self.root)

    def truncate(self, u: QSeries, length: int) -> QSeries:
        return u.truncate(length)

    def mul(self, u: QSeries, f: Factor) -> QSeries:
        c, a, e = f
        return u.mul_binomial(self.scalar(c, a), e)

    def div(self, u: QSeries, f: Factor) -> QSeries:
        c, a, e = f
        return u.div_binomial(self.scalar(c, a), e)

    def add(self, u: QSeries, coef: int, zexp: int, qexp: int) -> None:
        block = u.array[: self.order + 1 - qexp]
        self.acc[qexp : qexp + block.shape[0]] += scale_rows(block, self.scalar(coef, zexp), self.root)

    def result(self) -> QSeries:
        return QSeries._wrap(self.acc, self.root)


class _BivariateTarget:
    def __init__(self, order: int):
        self.order = order
        self.acc = zeros(order + 1, 1)
        self.zmin = 0

    def one(self, length: int) -> ZQSeries:
        return ZQSeries.one(length)

    def truncate(self, u: ZQSeries, length: int) -> ZQSeries:
        return u.truncate(length)

    def mul(self, u: ZQSeries, f: Factor) -> ZQSeries:
        return u.mul_binomial(*f)

    def div(self, u: ZQSeries, f: Factor) -> ZQSeries:
        return u.div_binomial(*f)

    def add(self, u: ZQSeries, coef: int, zexp: int, qexp: int) -> None:
        block = u.array[: self.order + 1 - qexp]
        lo = u.zmin + zexp
        hi = lo + block.shape[1] - 1
        cur_hi = self.zmin + self.acc.shape[1] - 1
        new_lo, new_hi = min(lo, self.zmin), max(hi, cur_hi)
        if new_lo != self.zmin or new_hi != cur_hi:
            grown = zeros(self.order + 1, new_hi - new_lo + 1)
            off = self.zmin - new_lo
            grown[:, off : off + self.acc.shape[1]] = self.acc
            self.acc, self.zmin = grown, new_lo
        off = lo - self.zmin
        self.acc[qexp : qexp + block.shape[0], off : off + block.shape[1]] += coef * block

    def result(self) -> ZQSeries:
        return ZQSeries._wrap(self.acc, self.zmin)


def make_target(target, order: int):
    """``1`` for z = 1, a prime p for z = zeta_p, ``"z"`` for the two-variable series."""
    if target == "z":
        return _BivariateTarget(order)
    if target == 1:
        return _UnivariateTarget(order, 1)
    if target in (3, 5, 7):
        return _UnivariateTarget(order, target)
    raise ValueError(f"unknown evaluation target {target!r}")


# ---------------------------------------------------------------------------


def _restrict(factors: Mapping[Factor, int], length: int) -> dict[Factor, int]:
    return {f: m for f, m in factors.items() if f[2] <= length and m}


def _apply(t, u, delta: Mapping[Factor, int]):
    ups = [(f, m) for f, m in delta.items() if m > 0]
    downs = [(f, -m) for f, m in delta.items() if m < 0]
    for f, m in ups:
        for _ in range(m):
            u = t.mul(u, f)
    downs.sort(key=lambda fm: -fm[0][2])
    for f, m in downs:
        if f[2] == 0:
            raise ValueError(f"cannot divide by the q-free factor {f}")
        for _ in range(m):
            u = t.div(u, f)
    return u


def sum_terms(terms: Iterable[Term], order: int, target=1):
    """Evaluate sum of the given terms modulo q^(order+1).

    Terms with qexp > order are skipped.  The running product is rebuilt
    from scratch whenever qexp decreases between consecutive terms.
    """
    t = make_target(target, order)
    u = None
    current: dict[Factor, int] = {}
    length = -1
    for term in terms:
        if term.qexp > order or term.coef == 0:
            continue
        new_len = order - term.qexp
        wanted = _restrict(term.factors(new_len), new_len)
        if u is None or new_len > length:
            u = t.one(new_len)
            current = {}
        elif new_len < length:
            u = t.truncate(u, new_len)
            current = _restrict(current, new_len)
        delta = dict(wanted)
        for f, m in current.items():
            delta[f] = delta.get(f, 0) - m
        u = _apply(t, u, {f: m for f, m in delta.items() if m})
        current = wanted
        length = new_len
        t.add(u, term.coef, term.zexp, term.qexp)
    return t.result()


def product(factors: Mapping[Factor, int], order: int, target=1):
    """A single product of binomial factors."""
    return sum_terms([Term(1, 0, lambda L: factors)], order, target)
