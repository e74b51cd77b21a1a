"""Truncated power series in q over Z or Z[zeta_p].

A :class:`QSeries` of order N knows the coefficients of q^0 .. q^N exactly.
Coefficients live in a 2-D object array with one row per power of q; a row
has a single column for integer series and p - 1 columns (the zeta power
basis) for series over Z[zeta_p].

Products go through Kronecker substitution: both operands are packed into
one big integer each, multiplied with GMP, and unpacked.  Everything else
(binomial factors, geometric expansions) is done with sliced array updates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import gmpy2
import numpy as np

from .ring import CycInt, check_prime, reduce_columns

# ---------------------------------------------------------------------------
# Big-integer convolution


def _max_bits(arr: np.ndarray) -> int:
    best = 0
    for v in arr.flat:
        if v:
            b = int(v).bit_length()
            if b > best:
                best = b
    return best


def _bias_total(nbytes: int, slots: int) -> int:
    return int.from_bytes((1 << (8 * nbytes - 1)).to_bytes(nbytes, "little") * slots, "little")


def _pack(arr: np.ndarray, width: int, nbytes: int) -> int:
    bias = 1 << (8 * nbytes - 1)
    zero = bias.to_bytes(nbytes, "little")
    pad = zero * (width - arr.shape[1])
    chunks = []
    for row in arr:
        for v in row:
            chunks.append((int(v) + bias).to_bytes(nbytes, "little") if v else zero)
        chunks.append(pad)
    slots = arr.shape[0] * width
    return int.from_bytes(b"".join(chunks), "little") - _bias_total(nbytes, slots)


def _unpack(value: int, rows: int, width: int, nbytes: int) -> np.ndarray:
    slots = rows * width
    bias = 1 << (8 * nbytes - 1)
    biased = (value + _bias_total(nbytes, slots)) & ((1 << (8 * nbytes * slots)) - 1)
    raw = biased.to_bytes(nbytes * slots, "little")
    flat = [int.from_bytes(raw[i : i + nbytes], "little") - bias for i in range(0, len(raw), nbytes)]
    out = np.empty(slots, dtype=object)
    out[:] = flat
    return out.reshape(rows, width)


def convolve2d(a: np.ndarray, b: np.ndarray, rows: int) -> np.ndarray:
    """Exact 2-D convolution of integer object arrays, first ``rows`` rows only.

    Row index is the q-exponent, column index the inner (z or zeta)
    exponent; the result has ``a.shape[1] + b.shape[1] - 1`` columns.
    """
    rows = min(rows, a.shape[0] + b.shape[0] - 1)
    width = a.shape[1] + b.shape[1] - 1
    a = a[:rows]
    b = b[:rows]
    bits_a = _max_bits(a)
    bits_b = _max_bits(b)
    if rows <= 0:
        return np.zeros((0, width), dtype=object)
    if not bits_a or not bits_b:
        return np.zeros((rows, width), dtype=object)
    terms = min(a.shape[0] * a.shape[1], b.shape[0] * b.shape[1])
    nbytes = (bits_a + bits_b + terms.bit_length() + 2) // 8 + 1
    prod = gmpy2.mpz(_pack(a, width, nbytes)) * gmpy2.mpz(_pack(b, width, nbytes))
    return _unpack(int(prod), rows, width, nbytes)


def zeros(rows: int, width: int) -> np.ndarray:
    return np.zeros((rows, width), dtype=object)


# ---------------------------------------------------------------------------
# Scalars acting on coefficient rows


def scale_rows(block: np.ndarray, coef, root: int) -> np.ndarray:
    """Multiply every row of ``block`` (a series over Z[zeta_root]) by ``coef``."""
    if isinstance(coef, CycInt):
        if root == 1:
            raise ValueError("cyclotomic scalar applied to an integer series")
        if coef.p != root:
            raise ValueError(f"cannot combine Z[zeta_{root}] with Z[zeta_{coef.p}]")
        out = zeros(block.shape[0], 2 * root - 3)
        for i, c in enumerate(coef.coeffs):
            if c:
                out[:, i : i + root - 1] += c * block
        return reduce_columns(out, root)
    return block * int(coef)


def _is_unit_scalar(coef) -> bool:
    if isinstance(coef, CycInt):
        return coef.is_unit()
    return coef in (1, -1)


# ---------------------------------------------------------------------------


class QSeries:
    """Truncated power series sum_{n <= order} c_n q^n, immutable.

    ``root == 1`` means integer coefficients; ``root == p`` means Z[zeta_p].
    Binary operations truncate to the smaller order.  An integer series is
    promoted when combined with a Z[zeta_p] series; two different roots are
    rejected.
    """

    __slots__ = ("_c", "root")

    def __init__(self, coeffs: Iterable = (), order: int | None = None, root: int | None = None):
        coeffs = list(coeffs)
        if root is None:
            roots = {c.p for c in coeffs if isinstance(c, CycInt)}
            if len(roots) > 1:
                raise ValueError("mixed cyclotomic orders")
            root = roots.pop() if roots else 1
        if root != 1:
            check_prime(root)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        arr = zeros(order + 1, 1 if root == 1 else root - 1)
        for n, c in enumerate(coeffs[: order + 1]):
            if isinstance(c, CycInt):
                if root == 1 or c.p != root:
                    raise ValueError("coefficient ring mismatch")
                arr[n, :] = c.coeffs
            else:
                arr[n, 0] = int(c)
        object.__setattr__(self, "_c", arr)
        object.__setattr__(self, "root", root)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    @classmethod
    def _wrap(cls, arr: np.ndarray, root: int) -> QSeries:
        self = object.__new__(cls)
        object.__setattr__(self, "_c", arr)
        object.__setattr__(self, "root", root)
        return self

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, order: int, root: int = 1) -> QSeries:
        return cls._wrap(zeros(order + 1, 1 if root == 1 else root - 1), root)

    @classmethod
    def one(cls, order: int, root: int = 1) -> QSeries:
        return cls.monomial(0, order, 1, root)

    @classmethod
    def monomial(cls, exponent: int, order: int, coef=1, root: int | None = None) -> QSeries:
        """coef * q^exponent truncated to ``order``."""
        if root is None:
            root = coef.p if isinstance(coef, CycInt) else 1
        s = cls.zero(order, root)
        if 0 <= exponent <= order:
            if isinstance(coef, CycInt):
                s._c[exponent, :] = coef.coeffs
            else:
                s._c[exponent, 0] = int(coef)
        elif exponent < 0:
            raise ValueError("negative exponent")
        return s

    # -- basic accessors -----------------------------------------------------

    @property
    def order(self) -> int:
        return self._c.shape[0] - 1

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the coefficient rows."""
        view = self._c.view()
        view.flags.writeable = False
        return view

    def __getitem__(self, n: int):
        if not 0 <= n <= self.order:
            raise IndexError(f"q^{n} is outside the truncation order {self.order}")
        if self.root == 1:
            return int(self._c[n, 0])
        return CycInt(self.root, [int(v) for v in self._c[n]])

    def coeffs(self) -> list:
        return [self[n] for n in range(self.order + 1)]

    def __iter__(self):
        return iter(self.coeffs())

    def __len__(self) -> int:
        return self.order + 1

    def is_zero(self) -> bool:
        return not np.any(self._c != 0)

    def valuation(self) -> int | None:
        nz = np.nonzero(np.any(self._c != 0, axis=1))[0]
        return int(nz[0]) if len(nz) else None

    def support(self) -> list[int]:
        return [int(n) for n in np.nonzero(np.any(self._c != 0, axis=1))[0]]

    # -- ring plumbing -------------------------------------------------------

    def promote(self, root: int) -> QSeries:
        if root == self.root:
            return self
        if self.root != 1:
            raise ValueError(f"cannot move Z[zeta_{self.root}] series to Z[zeta_{root}]")
        check_prime(root)
        arr = zeros(self._c.shape[0], root - 1)
        arr[:, 0] = self._c[:, 0]
        return QSeries._wrap(arr, root)

    def _common(self, other: QSeries) -> tuple[np.ndarray, np.ndarray, int]:
        if not isinstance(other, QSeries):
            raise TypeError(f"expected QSeries, got {type(other).__name__}")
        if self.root != other.root and self.root != 1 and other.root != 1:
            raise ValueError(f"ring mismatch: Z[zeta_{self.root}] vs Z[zeta_{other.root}]")
        root = max(self.root, other.root)
        a, b = self.promote(root), other.promote(root)
        n = min(a.order, b.order) + 1
        return a._c[:n], b._c[:n], root

    def truncate(self, order: int) -> QSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return QSeries._wrap(self._c[: order + 1].copy(), self.root)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, CycInt)):
            other = QSeries.monomial(0, self.order, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, root = self._common(other)
        return QSeries._wrap(a + b, root)

    __radd__ = __add__

    def __neg__(self) -> QSeries:
        return QSeries._wrap(-self._c, self.root)

    def __sub__(self, other):
        if isinstance(other, (int, CycInt)):
            other = QSeries.monomial(0, self.order, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, root = self._common(other)
        return QSeries._wrap(a - b, root)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CycInt):
            s = self.promote(other.p)
            return QSeries._wrap(scale_rows(s._c, other, s.root), s.root)
        if isinstance(other, (int, np.integer)):
            return QSeries._wrap(self._c * int(other), self.root)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, root = self._common(other)
        prod = convolve2d(a, b, a.shape[0])
        if root != 1:
            prod = reduce_columns(prod, root)
        return QSeries._wrap(prod, root)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        if isinstance(other, CycInt):
            return self * other.inverse()
        if isinstance(other, int) and other in (1, -1):
            return self * other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, CycInt)):
            return self.invert() * other
        return NotImplemented

    def __pow__(self, k: int) -> QSeries:
        if k < 0:
            return self.invert() ** (-k)
        result = QSeries.one(self.order, self.root)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        """Equality of the coefficients both operands know (up to the smaller order)."""
        if isinstance(other, (int, CycInt)):
            other = QSeries.monomial(0, self.order, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return first_mismatch(self, other) is None

    __hash__ = None

    def invert(self) -> QSeries:
        """Multiplicative inverse by Newton iteration; the constant term must be a unit."""
        c0 = self[0]
        if not _is_unit_scalar(c0):
            raise ZeroDivisionError(f"constant term {c0} is not a unit")
        inv0 = c0.inverse() if isinstance(c0, CycInt) else c0
        b = QSeries.monomial(0, 0, inv0, self.root)
        prec = 1
        while prec <= self.order:
            prec = min(2 * prec, self.order + 1)
            a = self.truncate(prec - 1)
            b = QSeries._wrap(np.vstack([b._c, zeros(prec - b._c.shape[0], b._c.shape[1])]), self.root)
            err = QSeries.one(prec - 1, self.root) - a * b
            b = b + b * err
        return b

    # -- structural operations ----------------------------------------------

    def shift(self, k: int) -> QSeries:
        """Multiply by q^k (k >= 0), keeping the order."""
        if k < 0:
            raise ValueError("negative shift")
        out = zeros(*self._c.shape)
        if k <= self.order:
            out[k:] = self._c[: self.order + 1 - k]
        return QSeries._wrap(out, self.root)

    def substitute_power(self, k: int, order: int | None = None) -> QSeries:
        """Replace q by q^k.  The result keeps this series' order unless told otherwise."""
        if k < 1:
            raise ValueError("k must be positive")
        if order is None:
            order = self.order
        if order > k * (self.order + 1) - 1:
            raise ValueError("requested order exceeds what the substitution determines")
        out = zeros(order + 1, self._c.shape[1])
        take = order // k + 1
        out[: take * k : k] = self._c[:take]
        return QSeries._wrap(out, self.root)

    def sift(self, m: int, r: int) -> QSeries:
        """Series sum_j c_{m j + r} q^j."""
        if not 0 <= r < m:
            raise ValueError("need 0 <= r < m")
        picked = self._c[r::m]
        return QSeries._wrap(picked.copy(), self.root)

    def residue_part(self, m: int, r: int) -> QSeries:
        """Keep the q^n terms with n == r (mod m), zeroing the rest."""
        if not 0 <= r < m:
            raise ValueError("need 0 <= r < m")
        out = zeros(*self._c.shape)
        out[r::m] = self._c[r::m]
        return QSeries._wrap(out, self.root)

    def mul_binomial(self, coef, e: int) -> QSeries:
        """Multiply by (1 - coef q^e)."""
        out = self._c.copy()
        root = self.root
        if isinstance(coef, CycInt) and root == 1:
            return self.promote(coef.p).mul_binomial(coef, e)
        if e == 0:
            return QSeries._wrap(out - scale_rows(self._c, coef, root), root)
        if e <= self.order:
            out[e:] -= scale_rows(self._c[: self.order + 1 - e], coef, root)
        return QSeries._wrap(out, root)

    def div_binomial(self, coef, e: int) -> QSeries:
        """Divide by (1 - coef q^e) for e >= 1."""
        if e < 1:
            raise ValueError("geometric expansion needs a positive q-exponent")
        if isinstance(coef, CycInt) and self.root == 1:
            return self.promote(coef.p).div_binomial(coef, e)
        out = self._c.copy()
        n = out.shape[0]
        for start in range(e, n, e):
            stop = min(start + e, n)
            out[start:stop] += scale_rows(out[start - e : stop - e], coef, self.root)
        return QSeries._wrap(out, self.root)

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs()[:12])
        more = ", ..." if self.order >= 12 else ""
        ring = "Z" if self.root == 1 else f"Z[zeta_{self.root}]"
        return f"QSeries[{ring}, O(q^{self.order + 1})]({shown}{more})"


def first_mismatch(a: QSeries, b: QSeries) -> int | None:
    """Smallest exponent where ``a`` and ``b`` differ (within both orders), else None."""
    x, y, _ = a._common(b)
    diff = np.nonzero(np.any(x != y, axis=1))[0]
    return int(diff[0]) if len(diff) else None


# ---------------------------------------------------------------------------
# Products, theta series and Lambert sums


@dataclass(frozen=True)
class QMonomial:
    """The monomial sign * q^exponent, used as the base of a q-Pochhammer symbol."""

    sign: int = 1
    exponent: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")

    def times(self, other: QMonomial) -> QMonomial:
        return QMonomial(self.sign * other.sign, self.exponent + other.exponent)

    def __str__(self) -> str:
        s = "-" if self.sign < 0 else ""
        return f"{s}q^{self.exponent}"


def poch_finite(a: QMonomial, m: int, n: int, order: int) -> QSeries:
    """(a; q^m)_n = prod_{j<n} (1 - a q^{jm})."""
    if m < 1:
        raise ValueError("step must be positive")
    s = QSeries.one(order)
    for j in range(n):
        e = a.exponent + j * m
        if e > order:
            break
        s = s.mul_binomial(a.sign, e)
    return s


def poch_infinite(a: QMonomial, m: int, order: int) -> QSeries:
    """(a; q^m)_inf truncated to ``order``.

    Factors 1 - a q^e with e > order are congruent to 1 modulo q^(order+1)
    and are skipped.
    """
    if m < 1:
        raise ValueError("step must be positive")
    if a.exponent == 0 and a.sign == 1:
        raise ValueError("(1; q)_inf vanishes identically")
    s = QSeries.one(order)
    e = a.exponent
    while e <= order:
        s = s.mul_binomial(a.sign, e)
        e += m
    return s


def eta(m: int, order: int) -> QSeries:
    """(q^m; q^m)_inf, without any fractional q-power prefactor."""
    return poch_infinite(QMonomial(1, m), m, order)


def jacprod(a: int, m: int, order: int) -> QSeries:
    """[q^a; q^m] = (q^a, q^(m-a); q^m)_inf for 0 < a < m."""
    if not 0 < a < m:
        raise ValueError(f"jacprod needs 0 < a < m, got a={a}, m={m}")
    return poch_infinite(QMonomial(1, a), m, order) * poch_infinite(QMonomial(1, m - a), m, order)


def _theta(exponent: Callable[[int], int], sign_of: Callable[[int], int], order: int) -> QSeries:
    """Sum over all integers n of sign_of(n) q^exponent(n); exponent must be convex."""
    coeffs = [0] * (order + 1)
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        prev = None
        while True:
            e = exponent(n)
            if e < 0:
                raise ValueError(f"negative exponent {e} at n={n}")
            if e <= order:
                coeffs[e] += sign_of(n)
            elif prev is not None and e >= prev:
                break
            prev = e
            n += direction
    return QSeries(coeffs, order)


def theta_jtp(variant: int | str, order: int, sign: int = 1, shift: int = 0) -> QSeries:
    """Theta-series sides of the Jacobi triple product with z = sign * q^shift.

    variant 1: sum (-1)^n z^n q^(n^2)       = (zq, q/z, q^2; q^2)_inf
    variant 2: sum (-1)^n z^n q^(n(n-1)/2) = (z, q/z, q; q)_inf
    "pentagonal": sum (-1)^n q^(n(3n-1)/2) = (q; q)_inf
    """
    if variant == 1:
        if abs(shift) > 1:
            raise ValueError("variant 1 needs |shift| <= 1 for nonnegative exponents")
        return _theta(lambda n: n * n + shift * n, lambda n: (-sign) ** (n % 2), order)
    if variant == 2:
        if shift not in (0, 1):
            raise ValueError("variant 2 needs shift in {0, 1} for nonnegative exponents")
        return _theta(lambda n: n * (n - 1) // 2 + shift * n, lambda n: (-sign) ** (n % 2), order)
    if variant == "pentagonal":
        return _theta(lambda n: n * (3 * n - 1) // 2, lambda n: (-1) ** (n % 2), order)
    raise ValueError(f"unknown theta variant {variant!r}")


def lambert_sum(
    numerator_exp: Callable[[int], int],
    denominator_exp: Callable[[int], int],
    order: int,
    alternating: bool = True,
) -> QSeries:
    """sum over integers n of (-1)^n q^A(n) / (1 - q^B(n)).

    A must be a quadratic with positive leading coefficient and B linear.  A
    term with B(n) < 0 is rewritten with 1/(1 - q^-m) = -q^m/(1 - q^m) before
    expanding.  Only terms whose leading exponent is <= order contribute.
    """
    out = np.zeros(order + 1, dtype=object)

    def leading(n: int) -> tuple[int, int, int]:
        a, b = numerator_exp(n), denominator_exp(n)
        if b == 0:
            raise ValueError(f"denominator exponent vanishes at n={n}")
        sgn = (-1) ** (n % 2) if alternating else 1
        if b < 0:
            return a - b, -b, -sgn
        return a, b, sgn

    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        prev = None
        while True:
            start, step, sgn = leading(n)
            if start < 0:
                raise ValueError(f"negative leading exponent at n={n}")
            if start <= order:
                out[start : order + 1 : step] += sgn
            elif prev is not None and start >= prev:
                break
            prev = start
            n += direction
    return QSeries(out.tolist(), order)


def partition_series(order: int) -> QSeries:
    """1/(q; q)_inf."""
    return eta(1, order).invert()


def series_from_terms(terms: Iterable[tuple[int, int]], order: int) -> QSeries:
    """Sum of coef * q^exp over (exp, coef) pairs, ignoring exponents past order."""
    coeffs = [0] * (order + 1)
    for e, c in terms:
        if e < 0:
            raise ValueError("negative exponent")
        if e <= order:
            coeffs[e] += c
    return QSeries(coeffs, order)


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def qs_sub(a: QSeries, b: QSeries) -> QSeries:
    return a - b


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def qs_invert(a: QSeries) -> QSeries:
    return a.invert()


def qs_substitute_power(a: QSeries, k: int) -> QSeries:
    return a.substitute_power(k)


def cyc_series(values: Sequence, order: int, p: int) -> QSeries:
    return QSeries(values, order, root=p)
