"""Bailey pairs and the transforms built on them.

A pair (alpha, beta) relative to (a, q) satisfies

    beta_n = sum_{k=0}^{n} alpha_k / ((q;q)_{n-k} (aq;q)_{n+k}).

Every alpha_n used here is a short polynomial in q (stored as a dict
exponent -> coefficient); every beta_n is a monomial over a product of
binomials, which lets the summation engine evaluate sums of beta_n cheaply.
The parameter a is always a signed power of q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ._sums import Factor, Term, combine, pochhammer, product, sum_terms
from .qseries import QMonomial, QSeries, poch_infinite, series_from_terms
from .zqseries import ZQSeries

Poly = dict  # q-exponent -> integer coefficient


@dataclass(frozen=True)
class BetaTerm:
    """beta_n = coef * q^qexp * prod (1 - c q^e)^mult."""

    coef: int
    qexp: int
    factors: Callable[[int], dict[Factor, int]]


@dataclass(frozen=True)
class BaileyPair:
    name: str
    a: QMonomial
    alpha: Callable[[int], Poly]
    beta_term: Callable[[int], BetaTerm]
    description: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def alpha_series(self, n: int, order: int) -> QSeries:
        return series_from_terms(self.alpha(n).items(), order)

    def beta(self, n: int, order: int) -> QSeries:
        bt = self.beta_term(n)
        return sum_terms([Term(bt.coef, bt.qexp, bt.factors)], order)


def _qq(start: int, count: int, limit: int, step: int = 1, sign: int = 1) -> dict[Factor, int]:
    return pochhammer(sign, 0, start, step, count, limit)


def _denominator(*parts: dict[Factor, int]) -> Callable[[int], dict[Factor, int]]:
    merged = combine(*[(p, -1) for p in parts])
    return lambda L: {f: m for f, m in merged.items() if f[2] <= L}


# -- the eight pairs relative to (1, q) --------------------------------------


def _alpha_a_group(n: int, c: tuple[int, int, int, int, int, int]) -> Poly:
    """Shared shape for the A pairs.

    With n = 3k: q^(c0 k^2 - c1 k) + q^(c0 k^2 + c1 k);
    n = 3k+1: -q^(c0 k^2 + c2 k + c3);  n = 3k-1: -q^(c0 k^2 - c4 k + c5).
    """
    if n == 0:
        return {0: 1}
    c0, c1, c2, c3, c4, c5 = c
    k, r = divmod(n, 3)
    if r == 0:
        out: Poly = {}
        for e in (c0 * k * k - c1 * k, c0 * k * k + c1 * k):
            out[e] = out.get(e, 0) + 1
        return out
    if r == 1:
        return {c0 * k * k + c2 * k + c3: -1}
    k += 1
    return {c0 * k * k - c4 * k + c5: -1}


_A_ALPHA = {
    "A1": (6, 1, 5, 1, 5, 1),
    "A3": (6, 2, 2, 0, 2, 0),
    "A5": (3, 1, 1, 0, 1, 0),
    "A7": (3, 2, 4, 1, 4, 1),
}

_A_BETA_SHIFT = {
    "A1": lambda n: 0,
    "A3": lambda n: n,
    "A5": lambda n: n * n,
    "A7": lambda n: n * n - n,
}


def _alpha_c_group(n: int, quad: int) -> Poly:
    if n == 0:
        return {0: 1}
    if n % 2:
        return {}
    k = n // 2
    s = (-1) ** k
    base = quad * k * k - k
    return {base: s, base + 2 * k: s}


def _alpha_e2(n: int) -> Poly:
    return {0: 1} if n == 0 else {0: 2 * (-1) ** n}


def _alpha_e4(n: int) -> Poly:
    if n == 0:
        return {0: 1}
    s = (-1) ** n
    return {n * n - n: s, n * n + n: s}


def _make_registry() -> dict[str, BaileyPair]:
    one = QMonomial(1, 0)
    reg: dict[str, BaileyPair] = {}
    for name, consts in _A_ALPHA.items():
        shift = _A_BETA_SHIFT[name]
        reg[name] = BaileyPair(
            name,
            one,
            lambda n, c=consts: _alpha_a_group(n, c),
            lambda n, s=shift: BetaTerm(1, s(n), _denominator(_qq(1, 2 * n, 2 * n))),
            "q^e(n)/(q;q)_{2n}",
        )
    for name, quad, shift in (("C1", 3, lambda n: 0), ("C5", 1, lambda n: (n * n - n) // 2)):
        reg[name] = BaileyPair(
            name,
            one,
            lambda n, d=quad: _alpha_c_group(n, d),
            lambda n, s=shift: BetaTerm(1, s(n), _denominator(_qq(1, n, 2 * n, step=2), _qq(1, n, n))),
            "q^e(n)/((q;q^2)_n (q;q)_n)",
        )
    reg["E2"] = BaileyPair(
        "E2",
        one,
        _alpha_e2,
        lambda n: BetaTerm((-1) ** n, 0, _denominator(_qq(2, n, 2 * n, step=2))),
        "(-1)^n/(q^2;q^2)_n",
    )
    reg["E4"] = BaileyPair(
        "E4",
        one,
        _alpha_e4,
        lambda n: BetaTerm(1, n, _denominator(_qq(2, n, 2 * n, step=2))),
        "q^n/(q^2;q^2)_n",
    )
    return reg


_REGISTRY = _make_registry()


def generic_pair(a: QMonomial = QMonomial(1, 1)) -> BaileyPair:
    """beta_n = 1/(aq, q; q)_n with alpha = 1, 0, 0, ..."""
    s, k = a.sign, a.exponent
    return BaileyPair(
        "generic1",
        a,
        lambda n: {0: 1} if n == 0 else {},
        lambda n: BetaTerm(1, 0, _denominator(_qq(k + 1, n, k + n, sign=s), _qq(1, n, n))),
        "1/(aq,q;q)_n",
    )


def generic_pair_star(a: QMonomial = QMonomial(1, 1)) -> BaileyPair:
    """beta_n = 1/(aq^2, q; q)_n with alpha = 1, -aq, 0, 0, ..."""
    s, k = a.sign, a.exponent

    def alpha(n: int) -> Poly:
        if n == 0:
            return {0: 1}
        if n == 1:
            return {k + 1: -s}
        return {}

    return BaileyPair(
        "generic2",
        a,
        alpha,
        lambda n: BetaTerm(1, 0, _denominator(_qq(k + 2, n, k + 1 + n, sign=s), _qq(1, n, n))),
        "1/(aq^2,q;q)_n",
    )


PAIR_NAMES = tuple(_REGISTRY) + ("generic1", "generic2")


def registry_lookup(name: str, a: QMonomial | None = None) -> BaileyPair:
    """Registered pair by name; ``a`` only applies to the two generic pairs."""
    if name in _REGISTRY:
        if a is not None and a != QMonomial(1, 0):
            raise ValueError(f"pair {name} is relative to (1, q) only")
        return _REGISTRY[name]
    if name == "generic1":
        return generic_pair(a or QMonomial(1, 1))
    if name == "generic2":
        return generic_pair_star(a or QMonomial(1, 1))
    raise KeyError(f"unknown Bailey pair {name!r}; known: {', '.join(PAIR_NAMES)}")


# ---------------------------------------------------------------------------
# Definition check


def _inverse_poch_table(a: QMonomial, count: int, order: int) -> list[QSeries]:
    """[1/(aq;q)_m for m in 0..count]."""
    out = [QSeries.one(order)]
    cur = out[0]
    for m in range(1, count + 1):
        e = a.exponent + m
        if e == 0:
            raise ZeroDivisionError("(aq;q)_m has a vanishing factor")
        cur = cur.div_binomial(a.sign, e)
        out.append(cur)
    return out


def _poly_times(poly: Poly, s: QSeries) -> QSeries:
    out = QSeries.zero(s.order)
    for e, c in poly.items():
        if e <= s.order:
            out = out + s.shift(e) * c
    return out


@dataclass
class PairReport:
    pair: str
    order: int
    results: list[tuple[int, int | None]]  # (n, first mismatching exponent or None)

    @property
    def passed(self) -> bool:
        return all(m is None for _, m in self.results)

    @property
    def first_failure(self) -> int | None:
        for n, m in self.results:
            if m is not None:
                return n
        return None


def verify_pair(pair: BaileyPair, n_max: int, order: int) -> PairReport:
    """Check the defining relation for n = 0..n_max to the given order."""
    from .qseries import first_mismatch

    inv_q = _inverse_poch_table(QMonomial(1, 0), 2 * n_max, order)
    inv_aq = _inverse_poch_table(pair.a, 2 * n_max, order)
    results = []
    for n in range(n_max + 1):
        rhs = QSeries.zero(order)
        for k in range(n + 1):
            alpha = pair.alpha(k)
            if alpha:
                rhs = rhs + _poly_times(alpha, inv_q[n - k] * inv_aq[n + k])
        results.append((n, first_mismatch(pair.beta(n, order), rhs)))
    return PairReport(pair.name, order, results)


# ---------------------------------------------------------------------------
# Limiting cases of Bailey's lemma


def _poch_inf(sign: int, exponent: int, step: int, order: int) -> QSeries:
    return poch_infinite(QMonomial(sign, exponent), step, order)


def _alpha_valuation(pair: BaileyPair, r: int) -> int | None:
    poly = pair.alpha(r)
    live = [e for e, c in poly.items() if c]
    return min(live) if live else None


def applicable_variants(pair: BaileyPair) -> tuple[int, ...]:
    s, k = pair.a.sign, pair.a.exponent
    out = [1, 3, 4, 5, 6]
    if s == 1 and k % 2 == 1:
        out += [2, 7]
    return tuple(sorted(out))


def _lhs(pair: BaileyPair, order: int, weight: Callable[[int], tuple[int, int, dict[Factor, int]]]) -> QSeries:
    """sum_n weight_n * beta_n, with weight_n = sign * q^e * prod of binomials."""

    def terms():
        for n in range(order + 1):
            sign, wexp, wfac = weight(n)
            bt = pair.beta_term(n)
            qexp = wexp + bt.qexp
            if wexp > order:
                return
            yield Term(
                sign * bt.coef,
                qexp,
                lambda L, bt=bt, wfac=wfac: combine((bt.factors(L), 1), (wfac, 1)),
            )

    return sum_terms(terms(), order)


def _single_sum(pair: BaileyPair, order: int, weight: Callable[[int], tuple[int, int]]) -> QSeries:
    """sum_r sign_r q^(e_r) alpha_r for a monomial weight (e_r, sign_r)."""
    acc: list[tuple[int, int]] = []
    for r in range(order + 1):
        e1, c1 = weight(r)
        for e2, c2 in pair.alpha(r).items():
            acc.append((e1 + e2, c1 * c2))
    return series_from_terms(acc, order)


def _double_sum(pair: BaileyPair, order: int, term: Callable[[int, int], list[tuple[int, int]]], n_start: int = 0) -> QSeries:
    """sum over n >= n_start, r >= 0 of term(n, r) * alpha_r.

    ``term`` returns monomials (exponent, coef) whose smallest exponent is
    increasing in n for each fixed r, so each row stops at the first n that
    passes ``order``.
    """
    acc: list[tuple[int, int]] = []
    for r in range(order + 1):
        val = _alpha_valuation(pair, r)
        if val is None:
            continue
        alpha = pair.alpha(r)
        n = n_start
        while True:
            monos = term(n, r)
            if min(e for e, _ in monos) + val > order:
                break
            for e1, c1 in monos:
                for e2, c2 in alpha.items():
                    acc.append((e1 + e2, c1 * c2))
            n += 1
    return series_from_terms(acc, order)


def bailey_limit(pair: BaileyPair, variant: int, order: int) -> tuple[QSeries, QSeries]:
    """Both sides of one of the seven limiting forms of Bailey's lemma.

    For variant 7 the pair must be relative to (b^2 q, q); with the pair's
    parameter q^(2m+1) this means b = q^m.
    """
    s, k = pair.a.sign, pair.a.exponent
    N = order
    if variant not in applicable_variants(pair):
        raise ValueError(f"variant {variant} does not apply to a pair relative to ({pair.a}, q)")
    inv = lambda x: x.invert()  # noqa: E731
    aq_inf = _poch_inf(s, k + 1, 1, N)
    q_inf = _poch_inf(1, 1, 1, N)

    def a_pow(n: int) -> tuple[int, int]:
        return s**n, k * n

    if variant == 1:
        def w(n):
            sg, e = a_pow(n)
            return sg, e + n * n, {}

        lhs = _lhs(pair, N, w)
        rhs = inv(aq_inf) * _single_sum(pair, N, lambda r: (k * r + r * r, s**r))
        return lhs, rhs

    if variant == 2:
        h = (k + 1) // 2  # sqrt(aq) = q^h

        def w(n):
            return 1, (n * n + k * n) // 2, pochhammer(-1, 0, h, 1, n, N)

        lhs = _lhs(pair, N, w)
        rhs_sum = _single_sum(pair, N, lambda r: ((r * r + k * r) // 2, 1))
        rhs = _poch_inf(-1, h, 1, N) * inv(aq_inf) * rhs_sum
        return lhs, rhs

    if variant == 3:
        def w(n):
            return (-1) ** n, n, pochhammer(s, 0, k, 2, n, N)

        lhs = _lhs(pair, N, w)

        def terms():
            for r in range(N + 1):
                alpha = pair.alpha(r)
                if k == 0 and s == 1:
                    if r == 0:
                        for e, c in alpha.items():
                            yield Term(c, e, lambda L: {})
                    continue
                for e, c in alpha.items():
                    if r + e <= N:
                        yield Term(
                            (-1) ** r * c,
                            r + e,
                            lambda L, r=r: combine(({(s, 0, k): 1}, 1), ({(s, 0, k + 2 * r): 1}, -1)),
                        )

        rhs_sum = sum_terms(terms(), N)
        rhs = _poch_inf(s, k + 2, 2, N) * inv(aq_inf * _poch_inf(-1, 1, 1, N)) * rhs_sum
        return lhs, rhs

    if variant in (4, 5):
        step = 1 if variant == 4 else 2
        lhs = _lhs(pair, N, lambda n: (1, step * n, {}))
        if variant == 4:
            def mono(n, r):
                sg, e = a_pow(n)
                return [(e + n * (n + 1) // 2 + 2 * n * r + r, (-1) ** n * sg)]

            total = _double_sum(pair, N, mono)
        else:
            def mono(n, r):
                if n == 0:
                    return [(2 * r, 1)]
                sg, e = a_pow(n - 1)
                base = e + n * (n + 1) // 2 + 2 * n * r
                return [(base, (-1) ** n * sg), (base + k + 2 * r, (-1) ** n * sg * s)]

            total = _double_sum(pair, N, mono)
        rhs = inv(aq_inf * q_inf) * total
        return lhs, rhs

    if variant == 6:
        lhs = _lhs(pair, N, lambda n: (1, 2 * n, pochhammer(s, 0, k + 1, 2, n, N)))

        def mono(n, r):
            sg, e = a_pow(n)
            base = e + n * n + n + 2 * n * r + 2 * r
            return [(base, (-1) ** n * sg), (base + 2 * n + 2, -((-1) ** n) * sg)]

        total = _double_sum(pair, N, mono)
        one_plus_q = QSeries.one(N).mul_binomial(-1, 1)
        rhs = inv(q_inf * _poch_inf(s, k + 2, 2, N) * one_plus_q) * total
        return lhs, rhs

    # variant 7: lemma parameter b with b^2 q = a, b = q^m
    m = (k - 1) // 2
    lhs = _lhs(pair, N, lambda n: (1, n, pochhammer(-1, 0, m + 1, 1, n, N)))

    def mono(n, r):
        base = 3 * m * n + n * (3 * n + 5) // 2 + 3 * n * r + r
        return [(base, 1), (base + m + n + r + 1, -1)]

    total = _double_sum(pair, N, mono)
    rhs = _poch_inf(-1, m + 1, 1, N) * inv(q_inf * _poch_inf(1, 2 * m + 2, 1, N)) * total
    return lhs, rhs


# ---------------------------------------------------------------------------
# Bailey's lemma with rho1 = z, rho2 = 1/z


def bailey_lemma_zz(pair: BaileyPair, order: int) -> tuple[ZQSeries, ZQSeries]:
    """Both sides of Bailey's lemma with rho1 = z, rho2 = 1/z, for a pair relative to (1, q).

    lhs = sum_n (z, 1/z; q)_n q^n beta_n
    rhs = (zq, q/z; q)_inf / (q;q)_inf^2
          * (alpha_0 + sum_{n>=1} (1-z)(1-1/z) q^n alpha_n / ((1-zq^n)(1-q^n/z)))
    """
    if pair.a != QMonomial(1, 0):
        raise ValueError("the two-variable lemma is implemented for pairs relative to (1, q)")
    N = order

    def lhs_terms():
        for n in range(N + 1):
            bt = pair.beta_term(n)
            if n + bt.qexp > N:
                if n > N:
                    return
                continue
            zz = combine((pochhammer(1, 1, 0, 1, n, N), 1), (pochhammer(1, -1, 0, 1, n, N), 1))
            yield Term(bt.coef, n + bt.qexp, lambda L, bt=bt, zz=zz: combine((bt.factors(L), 1), (zz, 1)))

    def rhs_terms():
        for e, c in pair.alpha(0).items():
            yield Term(c, e, lambda L: {})
        for n in range(1, N + 1):
            kernel = {(1, 1, 0): 1, (1, -1, 0): 1, (1, 1, n): -1, (1, -1, n): -1}
            for e, c in sorted(pair.alpha(n).items()):
                yield Term(c, n + e, lambda L, kernel=kernel: kernel)

    lhs = sum_terms(lhs_terms(), N, "z")
    inner = sum_terms(rhs_terms(), N, "z")
    crank_part = product(
        combine((pochhammer(1, 1, 1, 1, None, N), 1), (pochhammer(1, -1, 1, 1, None, N), 1)), N, "z"
    )
    q_inf = _poch_inf(1, 1, 1, N)
    rhs = crank_part * inner * (q_inf * q_inf).invert()
    return lhs, rhs
