"""Brute-force partition enumeration and the weighted smallest-parts counts.

These are the independent oracles for the series in :mod:`.spt`: nothing
here touches q-series code.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

PAIR_KINDS = ("A1", "A3", "A5", "A7")
OVERPARTITION_KINDS = ("bar", "E2", "E4")
KINDS = ("plain", "bar", "M2", "A1", "A3", "A5", "A7", "C1", "C5", "E2", "E4")

PAIR_GUARD = 32
DEFAULT_GUARD = 40


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError("parts must be non-increasing")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def smallest(self) -> int:
        return self.parts[-1] if self.parts else 0

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def multiplicity(self, part: int) -> int:
        return self.parts.count(part)

    def __len__(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class Overpartition:
    """A partition plus the set of part sizes whose first occurrence is overlined."""

    parts: tuple[int, ...]
    overlined: frozenset[int] = frozenset()

    def __post_init__(self):
        Partition(self.parts)
        if not self.overlined <= set(self.parts):
            raise ValueError("only sizes that occur can be overlined")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def smallest(self) -> int:
        return self.parts[-1] if self.parts else 0

    def __str__(self) -> str:
        seen: set[int] = set()
        shown = []
        for p in self.parts:
            if p in self.overlined and p not in seen:
                shown.append(f"{p}'")
            else:
                shown.append(str(p))
            seen.add(p)
        return "+".join(shown) or "()"


def _parts_in_range(n: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n (non-increasing tuples) with every part in [lo, hi]."""
    if n == 0:
        yield ()
        return
    for first in range(min(n, hi), lo - 1, -1):
        for rest in _parts_in_range(n - first, lo, first):
            yield (first,) + rest


def enum_partitions(n: int) -> list[Partition]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Partition(p) for p in _parts_in_range(n, 1, n)]


def enum_overpartitions(n: int) -> list[Overpartition]:
    out = []
    for p in enum_partitions(n):
        sizes = sorted(set(p.parts))
        for mask in range(1 << len(sizes)):
            marked = frozenset(s for i, s in enumerate(sizes) if mask >> i & 1)
            out.append(Overpartition(p.parts, marked))
    return out


def _guard(kind: str, n: int, guard: int | None) -> None:
    limit = guard if guard is not None else (PAIR_GUARD if kind in PAIR_KINDS else DEFAULT_GUARD)
    if n > limit:
        raise ValueError(f"n={n} exceeds the enumeration guard {limit} for kind {kind}")


def _pair_weight(kind: str, s: int, m: int) -> int:
    if kind == "A1":
        return m
    if kind == "A3":
        return m - 1
    if kind == "A5":
        return max(0, m - s)
    return max(0, m - s + 1)


def oracle_spt(kind: str, n: int, guard: int | None = None) -> int:
    """Weighted smallest-part count of ``kind`` at n, by explicit enumeration."""
    if kind not in KINDS:
        raise KeyError(f"unknown kind {kind!r}; known: {', '.join(KINDS)}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    _guard(kind, n, guard)
    if n == 0:
        return 0

    if kind == "plain":
        return sum(p.multiplicity(p.smallest) for p in enum_partitions(n))

    if kind == "M2":
        total = 0
        for p in enum_partitions(n):
            counts = Counter(p.parts)
            if p.smallest % 2 == 0 and all(c == 1 for part, c in counts.items() if part % 2):
                total += counts[p.smallest]
        return total

    if kind in PAIR_KINDS:
        total = 0
        for n1 in range(1, n + 1):
            for p1 in enum_partitions(n1):
                s = p1.smallest
                w = _pair_weight(kind, s, p1.multiplicity(s))
                if w:
                    total += w * sum(1 for _ in _parts_in_range(n - n1, s + 1, 2 * s))
        return total

    if kind in ("C1", "C5"):
        total = 0
        for p in enum_partitions(n):
            s = p.smallest
            if all(part < 2 * s for part in p.parts if part % 2):
                total += p.multiplicity(s)
        if kind == "C5" and n % 2 == 0:
            total -= oracle_spt("plain", n // 2, guard=max(guard or 0, n))
        return total

    # overpartitions whose smallest part is not overlined
    total = 0
    for op in enum_overpartitions(n):
        s = op.smallest
        if s in op.overlined:
            continue
        m = op.parts.count(s)
        if kind == "bar":
            total += m
        elif kind == "E2":
            total += (-1) ** s * m
        else:
            total += m - 1
    return total


def oracle_rank_counts(n: int) -> dict[int, int]:
    """N(m, n): partitions of n by rank = largest part - number of parts."""
    out: Counter = Counter()
    for p in enum_partitions(n):
        out[p.largest - len(p)] += 1
    return dict(out)


def oracle_overline_rank(n: int) -> dict[int, int]:
    """Overpartitions of n by Dyson rank."""
    out: Counter = Counter()
    for op in enum_overpartitions(n):
        largest = op.parts[0] if op.parts else 0
        out[largest - len(op.parts)] += 1
    return dict(out)


def oracle_M2rank(n: int) -> dict[int, int]:
    """Partitions of n without repeated odd parts, by ceil(largest / 2) - number of parts."""
    out: Counter = Counter()
    for p in enum_partitions(n):
        counts = Counter(p.parts)
        if any(c > 1 for part, c in counts.items() if part % 2):
            continue
        out[(p.largest + 1) // 2 - len(p)] += 1
    return dict(out)
