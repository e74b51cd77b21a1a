"""Exact coefficient rings.

Series coefficients are either plain Python integers or elements of
Z[zeta_p] for p in {3, 5, 7}.  A cyclotomic integer is stored in the power
basis 1, zeta, ..., zeta^(p-2); the relation
zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)) is applied eagerly, so two
elements are equal exactly when their coefficient tuples are equal.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Union

import numpy as np

SUPPORTED_PRIMES = (3, 5, 7)

Scalar = Union[int, "CycInt"]


def check_prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"cyclotomic order must be one of {SUPPORTED_PRIMES}, got {p}")
    return p


def reduce_power_coeffs(coeffs: Mapping[int, int] | Iterable[int], p: int) -> tuple[int, ...]:
    """Reduce sum c_k zeta^k (any integer k) to the canonical basis.

    ``coeffs`` is either a sequence indexed from 0 or a mapping from
    exponent to coefficient; negative exponents are allowed in a mapping.
    """
    folded = [0] * p
    items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
    for k, c in items:
        if c:
            folded[k % p] += c
    top = folded[p - 1]
    return tuple(c - top for c in folded[: p - 1])


def reduce_columns(arr: np.ndarray, p: int) -> np.ndarray:
    """Columnwise version of :func:`reduce_power_coeffs` for 2-D object arrays.

    Column ``j`` of ``arr`` holds the zeta^j coefficients; the result has
    exactly p - 1 columns.
    """
    rows, width = arr.shape
    folded = np.zeros((rows, p), dtype=object)
    for j in range(width):
        folded[:, j % p] += arr[:, j]
    out = folded[:, : p - 1]
    if width >= p:
        out = out - folded[:, p - 1 : p]
    return out


class CycInt:
    """An element of Z[zeta_p], immutable."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Mapping[int, int] | Iterable[int] = ()):
        check_prime(p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", reduce_power_coeffs(coeffs, p))

    def __setattr__(self, name, value):
        raise AttributeError("CycInt is immutable")

    @classmethod
    def from_int(cls, p: int, n: int) -> CycInt:
        return cls(p, [n])

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> CycInt:
        return cls(p, {k: 1})

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError(f"cannot combine Z[zeta_{self.p}] with Z[zeta_{other.p}]")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt(self.p, [int(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = [0] * (2 * self.p - 3)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycInt(self.p, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycInt:
        if k < 0:
            return self.inverse() ** (-k)
        result = CycInt.from_int(self.p, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.p, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def galois(self, k: int) -> CycInt:
        """Image under the automorphism zeta -> zeta^k."""
        if k % self.p == 0:
            raise ValueError("zeta -> zeta^k is an automorphism only for k prime to p")
        return CycInt(self.p, {i * k: c for i, c in enumerate(self.coeffs)})

    def conjugate(self) -> CycInt:
        return self.galois(-1)

    def norm(self) -> int:
        prod = CycInt.from_int(self.p, 1)
        for k in range(1, self.p):
            prod = prod * self.galois(k)
        assert not any(prod.coeffs[1:])
        return prod.coeffs[0]

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse(self) -> CycInt:
        """Multiplicative inverse; raises ZeroDivisionError unless a unit."""
        cofactor = CycInt.from_int(self.p, 1)
        for k in range(2, self.p):
            cofactor = cofactor * self.galois(k)
        n = (self * cofactor).coeffs[0]
        if abs(n) != 1:
            raise ZeroDivisionError(f"{self} is not a unit of Z[zeta_{self.p}] (norm {n})")
        return cofactor * n

    def __repr__(self) -> str:
        return f"CycInt({self.p}, {list(self.coeffs)})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (f"z{self.p}" if i == 1 else f"z{self.p}^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def cyc_add(a: CycInt, b: CycInt) -> CycInt:
    if a.p != b.p:
        raise ValueError("order mismatch")
    return a + b


def cyc_mul(a: CycInt, b: CycInt) -> CycInt:
    if a.p != b.p:
        raise ValueError("order mismatch")
    return a * b


def zeta_monomial(p: int, coef: int, k: int) -> CycInt:
    """coef * zeta_p^k."""
    return CycInt(p, {k: coef})


def embed_laurent_at_root(poly: Mapping[int, int], p: int) -> CycInt:
    """Substitute z = zeta_p into a Laurent polynomial given as {exponent: coeff}."""
    check_prime(p)
    return CycInt(p, dict(poly.items()))
