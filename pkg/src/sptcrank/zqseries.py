"""Series in q whose coefficients are Laurent polynomials in z.

:class:`ZLaurentPoly` is a small sparse map used at the API boundary.
:class:`ZQSeries` stores its coefficients densely: row n is the q^n
coefficient, column j is the z^(zmin + j) coefficient.  Zero columns at
either edge are trimmed after every operation so the array always spans the
true z-support.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

import numpy as np

from .qseries import QSeries, convolve2d, zeros
from .ring import CycInt, check_prime


class ZLaurentPoly(Mapping):
    """Finite Laurent polynomial in z with integer coefficients.

    Behaves as a read-only mapping exponent -> nonzero coefficient.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for k, c in items:
            acc[int(k)] = acc.get(int(k), 0) + int(c)
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k]}

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> ZLaurentPoly:
        return cls({k: c})

    def __getitem__(self, k: int) -> int:
        return self._terms[k]

    def get(self, k: int, default: int = 0) -> int:
        return self._terms.get(k, default)

    def __iter__(self) -> Iterator[int]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = ZLaurentPoly({0: other})
        if isinstance(other, Mapping):
            return self._terms == dict(ZLaurentPoly(other)._terms)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def _coerce(self, other) -> ZLaurentPoly:
        if isinstance(other, ZLaurentPoly):
            return other
        if isinstance(other, int):
            return ZLaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ZLaurentPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> ZLaurentPoly:
        return ZLaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for i, a in self._terms.items():
            for j, b in other._terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return ZLaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ZLaurentPoly:
        if k < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = ZLaurentPoly({0: 1})
        for _ in range(k):
            out = out * self
        return out

    def reflect(self) -> ZLaurentPoly:
        """z -> 1/z."""
        return ZLaurentPoly({-k: c for k, c in self._terms.items()})

    def is_palindromic(self) -> bool:
        return self == self.reflect()

    def at_one(self) -> int:
        return sum(self._terms.values())

    def at_root(self, p: int) -> CycInt:
        return CycInt(check_prime(p), self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms.items():
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _trim(arr: np.ndarray, zmin: int) -> tuple[np.ndarray, int]:
    if arr.shape[1] == 0:
        return zeros(arr.shape[0], 1), 0
    live = np.nonzero(np.any(arr != 0, axis=0))[0]
    if len(live) == 0:
        return zeros(arr.shape[0], 1), 0
    lo, hi = int(live[0]), int(live[-1])
    if lo == 0 and hi == arr.shape[1] - 1:
        return arr, zmin
    return arr[:, lo : hi + 1].copy(), zmin + lo


class ZQSeries:
    """Truncated series sum_{n <= order} P_n(z) q^n with P_n a Laurent polynomial."""

    __slots__ = ("_c", "zmin")

    def __init__(self, coeffs: Iterable[Mapping[int, int] | int] = (), order: int | None = None):
        polys = [ZLaurentPoly({0: c}) if isinstance(c, int) else ZLaurentPoly(c) for c in coeffs]
        if order is None:
            order = len(polys) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        polys = polys[: order + 1]
        exps = [k for p in polys for k in p]
        lo = min(exps) if exps else 0
        hi = max(exps) if exps else 0
        arr = zeros(order + 1, hi - lo + 1)
        for n, p in enumerate(polys):
            for k, c in p.items():
                arr[n, k - lo] = c
        object.__setattr__(self, "_c", arr)
        object.__setattr__(self, "zmin", lo)

    def __setattr__(self, name, value):
        raise AttributeError("ZQSeries is immutable")

    @classmethod
    def _wrap(cls, arr: np.ndarray, zmin: int, trim: bool = True) -> ZQSeries:
        if trim:
            arr, zmin = _trim(arr, zmin)
        self = object.__new__(cls)
        object.__setattr__(self, "_c", arr)
        object.__setattr__(self, "zmin", zmin)
        return self

    @classmethod
    def zero(cls, order: int) -> ZQSeries:
        return cls._wrap(zeros(order + 1, 1), 0, trim=False)

    @classmethod
    def monomial(cls, zexp: int, qexp: int, order: int, coef: int = 1) -> ZQSeries:
        """coef * z^zexp * q^qexp."""
        if qexp < 0:
            raise ValueError("negative q-exponent")
        arr = zeros(order + 1, 1)
        if qexp <= order:
            arr[qexp, 0] = coef
        return cls._wrap(arr, zexp)

    @classmethod
    def one(cls, order: int) -> ZQSeries:
        return cls.monomial(0, 0, order)

    @classmethod
    def from_qseries(cls, s: QSeries, zexp: int = 0) -> ZQSeries:
        """Embed an integer q-series, multiplied by z^zexp."""
        if s.root != 1:
            raise ValueError("only integer q-series embed into ZQSeries")
        return cls._wrap(s.array.copy(), zexp)

    @classmethod
    def from_laurent(cls, poly: Mapping[int, int], order: int) -> ZQSeries:
        """A q-constant Laurent polynomial."""
        return cls([poly], order=order) if order >= 0 else cls.zero(0)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, int]], order: int) -> ZQSeries:
        """Sum of coef * z^zexp * q^qexp over (zexp, qexp, coef); q-exponents past order are dropped."""
        acc: dict[tuple[int, int], int] = {}
        for zexp, qexp, coef in terms:
            if qexp < 0:
                raise ValueError(f"negative q-exponent {qexp}")
            if qexp <= order and coef:
                acc[zexp, qexp] = acc.get((zexp, qexp), 0) + coef
        if not acc:
            return cls.zero(order)
        lo = min(z for z, _ in acc)
        hi = max(z for z, _ in acc)
        arr = zeros(order + 1, hi - lo + 1)
        for (z, n), c in acc.items():
            arr[n, z - lo] = c
        return cls._wrap(arr, lo)

    # -- accessors -----------------------------------------------------------

    @property
    def order(self) -> int:
        return self._c.shape[0] - 1

    @property
    def array(self) -> np.ndarray:
        view = self._c.view()
        view.flags.writeable = False
        return view

    @property
    def zmax(self) -> int:
        return self.zmin + self._c.shape[1] - 1

    def __getitem__(self, n: int) -> ZLaurentPoly:
        return self.coefficient(n)

    def coefficient(self, n: int) -> ZLaurentPoly:
        if not 0 <= n <= self.order:
            raise IndexError(f"q^{n} is outside the truncation order {self.order}")
        row = self._c[n]
        return ZLaurentPoly((self.zmin + j, int(v)) for j, v in enumerate(row) if v)

    def coeffs(self) -> list[ZLaurentPoly]:
        return [self.coefficient(n) for n in range(self.order + 1)]

    def extract(self, m: int, n: int) -> int:
        """Coefficient of z^m q^n."""
        if not 0 <= n <= self.order:
            raise IndexError(f"q^{n} is outside the truncation order {self.order}")
        j = m - self.zmin
        if 0 <= j < self._c.shape[1]:
            return int(self._c[n, j])
        return 0

    def row_support(self, n: int) -> tuple[int, int] | None:
        """Smallest and largest z-exponent present in the q^n coefficient."""
        live = np.nonzero(self._c[n] != 0)[0]
        if len(live) == 0:
            return None
        return self.zmin + int(live[0]), self.zmin + int(live[-1])

    def is_zero(self) -> bool:
        return not np.any(self._c != 0)

    # -- arithmetic ----------------------------------------------------------

    def _aligned(self, other: ZQSeries) -> tuple[np.ndarray, np.ndarray, int]:
        rows = min(self.order, other.order) + 1
        lo = min(self.zmin, other.zmin)
        hi = max(self.zmax, other.zmax)
        a = zeros(rows, hi - lo + 1)
        b = zeros(rows, hi - lo + 1)
        a[:, self.zmin - lo : self.zmin - lo + self._c.shape[1]] = self._c[:rows]
        b[:, other.zmin - lo : other.zmin - lo + other._c.shape[1]] = other._c[:rows]
        return a, b, lo

    def _lift(self, other) -> ZQSeries:
        if isinstance(other, ZQSeries):
            return other
        if isinstance(other, QSeries):
            return ZQSeries.from_qseries(other)
        if isinstance(other, int):
            return ZQSeries.monomial(0, 0, self.order, other)
        if isinstance(other, Mapping):
            return ZQSeries.from_laurent(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b, lo = self._aligned(other)
        return ZQSeries._wrap(a + b, lo)

    __radd__ = __add__

    def __neg__(self) -> ZQSeries:
        return ZQSeries._wrap(-self._c, self.zmin, trim=False)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b, lo = self._aligned(other)
        return ZQSeries._wrap(a - b, lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return ZQSeries._wrap(self._c * int(other), self.zmin)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        rows = min(self.order, other.order) + 1
        prod = convolve2d(self._c, other._c, rows)
        return ZQSeries._wrap(prod, self.zmin + other.zmin)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        """Equality of every z^m q^n coefficient up to the smaller order."""
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return zq_first_mismatch(self, other) is None

    __hash__ = None

    def truncate(self, order: int) -> ZQSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return ZQSeries._wrap(self._c[: order + 1].copy(), self.zmin)

    def shift(self, zexp: int = 0, qexp: int = 0) -> ZQSeries:
        """Multiply by z^zexp q^qexp, keeping the order."""
        if qexp < 0:
            raise ValueError("negative q-shift")
        out = zeros(*self._c.shape)
        if qexp <= self.order:
            out[qexp:] = self._c[: self.order + 1 - qexp]
        return ZQSeries._wrap(out, self.zmin + zexp)

    def mul_binomial(self, c: int, a: int, e: int) -> ZQSeries:
        """Multiply by (1 - c z^a q^e)."""
        if e < 0:
            raise ValueError("negative q-exponent")
        width = self._c.shape[1]
        lo = min(0, a)
        out = zeros(self._c.shape[0], width + abs(a))
        out[:, -lo : -lo + width] = self._c
        if e <= self.order:
            src = self._c[: self.order + 1 - e]
            out[e:, a - lo : a - lo + width] -= c * src
        return ZQSeries._wrap(out, self.zmin + lo)

    def div_binomial(self, c: int, a: int, e: int) -> ZQSeries:
        """Divide by (1 - c z^a q^e) for e >= 1."""
        if e < 1:
            raise ValueError("geometric expansion needs a positive q-exponent")
        rows, width = self._c.shape
        steps = (rows - 1) // e
        grow = abs(a) * steps
        lo = -grow if a < 0 else 0
        out = zeros(rows, width + grow)
        out[:, -lo : -lo + width] = self._c
        if a == 0:
            for start in range(e, rows, e):
                stop = min(start + e, rows)
                out[start:stop] += c * out[start - e : stop - e]
        elif a > 0:
            for start in range(e, rows, e):
                stop = min(start + e, rows)
                out[start:stop, a:] += c * out[start - e : stop - e, :-a]
        else:
            for start in range(e, rows, e):
                stop = min(start + e, rows)
                out[start:stop, :a] += c * out[start - e : stop - e, -a:]
        return ZQSeries._wrap(out, self.zmin + lo)

    def substitute_power(self, k: int, order: int | None = None) -> ZQSeries:
        """q -> q^k; keeps this series' order unless told otherwise."""
        if k < 1:
            raise ValueError("k must be positive")
        if order is None:
            order = self.order
        if order > k * (self.order + 1) - 1:
            raise ValueError("requested order exceeds what the substitution determines")
        out = zeros(order + 1, self._c.shape[1])
        take = order // k + 1
        out[: take * k : k] = self._c[:take]
        return ZQSeries._wrap(out, self.zmin)

    def residue_part(self, m: int, r: int) -> ZQSeries:
        """Keep the q^n terms with n == r (mod m), zeroing the rest."""
        if not 0 <= r < m:
            raise ValueError("need 0 <= r < m")
        out = zeros(*self._c.shape)
        out[r::m] = self._c[r::m]
        return ZQSeries._wrap(out, self.zmin)

    def reflect(self) -> ZQSeries:
        """z -> 1/z."""
        return ZQSeries._wrap(self._c[:, ::-1].copy(), -self.zmax)

    def is_palindromic(self) -> bool:
        if self.is_zero():
            return True
        return self.zmin == -self.zmax and bool(np.all(self._c == self._c[:, ::-1]))

    def support_within(self, bound: int) -> bool:
        """Each q^n coefficient lives in z-exponents [-n - bound, n + bound]."""
        for n in range(self.order + 1):
            s = self.row_support(n)
            if s is not None and (s[0] < -n - bound or s[1] > n + bound):
                return False
        return True

    def eval_z1(self) -> QSeries:
        col = np.empty((self._c.shape[0], 1), dtype=object)
        col[:, 0] = self._c.sum(axis=1) if self._c.shape[1] > 1 else self._c[:, 0]
        return QSeries._wrap(col, 1)

    def eval_root(self, p: int) -> QSeries:
        check_prime(p)
        folded = zeros(self._c.shape[0], p)
        for j in range(self._c.shape[1]):
            folded[:, (self.zmin + j) % p] += self._c[:, j]
        out = folded[:, : p - 1] - folded[:, p - 1 : p]
        return QSeries._wrap(out, p)

    def __repr__(self) -> str:
        shown = ", ".join(repr(self.coefficient(n)) for n in range(min(self.order + 1, 6)))
        more = ", ..." if self.order >= 6 else ""
        return f"ZQSeries[O(q^{self.order + 1})]({shown}{more})"


def zq_first_mismatch(a: ZQSeries, b: ZQSeries) -> int | None:
    """Smallest q-exponent whose Laurent coefficients differ, else None."""
    x, y, _ = a._aligned(b)
    diff = np.nonzero(np.any(x != y, axis=1))[0]
    return int(diff[0]) if len(diff) else None


def zq_add(a: ZQSeries, b: ZQSeries) -> ZQSeries:
    return a + b


def zq_mul(a: ZQSeries, b: ZQSeries) -> ZQSeries:
    return a * b


def geometric_factor_inverse(c: int, e: int, order: int) -> ZQSeries:
    """1/(1 - z^c q^e) = sum_k z^(ck) q^(ek) for e >= 1."""
    if e < 1:
        raise ValueError("1/(1 - z^c q^e) needs e >= 1 to be a power series in q")
    return ZQSeries.one(order).div_binomial(1, c, e)


def zq_eval_z1(a: ZQSeries) -> QSeries:
    return a.eval_z1()


def zq_eval_root(a: ZQSeries, p: int) -> QSeries:
    return a.eval_root(p)


def extract_m(a: ZQSeries, m: int, n: int) -> int:
    return a.extract(m, n)


def laurent(*terms: tuple[int, int]) -> ZLaurentPoly:
    """ZLaurentPoly from (exponent, coefficient) pairs."""
    return ZLaurentPoly(terms)
