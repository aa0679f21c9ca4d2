"""Sorted table of all hinge angles of order at most ``m^2``.

The table plays the part of a sine table: it is built once per radius and
then walked cyclically by the rotation engine.
"""
from __future__ import annotations

import bisect
import enum
import io
import math
from dataclasses import dataclass
from functools import cmp_to_key
from typing import IO, Iterable, Iterator, NamedTuple

from .exact_arith import EQ, GT, LT
from .hinge import HingeAngle, angle_as_float, canonicalize, compare, validate


class TableError(ValueError):
    pass


class HeaderError(TableError):
    pass


class UnsortedError(TableError):
    pass


class DuplicateError(TableError):
    pass


class RangeError(TableError):
    pass


class PositionKind(enum.Enum):
    AT_HINGE = "at"
    IN_INTERVAL = "in"


class AnglePosition(NamedTuple):
    """``AT_HINGE(j)`` is exactly angle ``j``; ``IN_INTERVAL(j)`` is the open
    interval between angle ``j`` and its cyclic successor."""

    kind: PositionKind
    index: int

    @classmethod
    def at(cls, j: int) -> AnglePosition:
        return cls(PositionKind.AT_HINGE, j)

    @classmethod
    def between(cls, j: int) -> AnglePosition:
        return cls(PositionKind.IN_INTERVAL, j)

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.index}"


@dataclass(frozen=True)
class HingeTable:
    m: int
    angles: tuple[HingeAngle, ...]

    def __len__(self) -> int:
        return len(self.angles)

    def __getitem__(self, j: int) -> HingeAngle:
        return self.angles[j]

    def __iter__(self) -> Iterator[HingeAngle]:
        return iter(self.angles)

    def successor(self, j: int) -> int:
        return successor(self, j)

    def locate(self, h) -> AnglePosition:
        return locate(self, h)


def enumerate_triples(m: int) -> Iterator[tuple[int, int, int]]:
    """Every valid generating triple with source norm ``<= m^2``.

    Order is fixed: ``p`` outer, ``q`` inner, ``k`` innermost.
    """
    mm = m * m
    for p in range(-m, m + 1):
        for q in range(-m, m + 1):
            n = p * p + q * q
            if n == 0 or n > mm:
                continue
            # (2k+1)^2 < 4n  <=>  |2k+1| <= isqrt(4n - 1)
            t = math.isqrt(4 * n - 1)
            kmax = (t - 1) // 2
            for k in range(-kmax - 1, kmax + 1):
                yield (p, q, k)


def canonical_set(m: int) -> set[HingeAngle]:
    return {canonicalize(t) for t in enumerate_triples(m)}


def sort_angles(angles: Iterable[HingeAngle], strategy: str = "adaptive") -> list[HingeAngle]:
    """Sort distinct hinge angles with the exact comparator.

    ``"comparison"`` is a plain comparison sort. ``"adaptive"`` first orders
    by an approximate float key, then runs an exact insertion sort, which only
    pays for the (rare) inversions the float key got wrong. Either way every
    ordering decision in the output comes from :func:`compare`.
    """
    items = list(angles)
    if strategy == "comparison":
        items.sort(key=cmp_to_key(compare))
        for a, b in zip(items, items[1:]):
            if compare(a, b) != LT:
                raise DuplicateError(f"equal angles {a} and {b} in sorted table")
        return items
    if strategy == "adaptive":
        items.sort(key=angle_as_float)
        return _exact_insertion_sort(items)
    raise ValueError(f"unknown sort strategy {strategy!r}")


def _exact_insertion_sort(items: list[HingeAngle]) -> list[HingeAngle]:
    for i in range(1, len(items)):
        x = items[i]
        j = i
        while j > 0:
            c = compare(items[j - 1], x)
            if c == LT:
                break
            if c == EQ:
                raise DuplicateError(f"equal angles {items[j - 1]} and {x} in sorted table")
            items[j] = items[j - 1]
            j -= 1
        items[j] = x
    return items


def build(m: int, strategy: str = "adaptive") -> HingeTable:
    """All hinge angles of order ``<= m^2``, sorted ascending on ``[0, 2pi)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    # dict keeps enumeration order, so the pre-sort sequence is reproducible
    distinct = dict.fromkeys(canonicalize(t) for t in enumerate_triples(m))
    return HingeTable(m, tuple(sort_angles(distinct, strategy)))


def successor(t: HingeTable, j: int) -> int:
    if not t.angles:
        raise TableError("empty table has no successor")
    return (j + 1) % len(t.angles)


def locate(t: HingeTable, h) -> AnglePosition:
    """Exact position of angle ``h`` relative to the table entries."""
    if not t.angles:
        raise TableError("cannot locate in an empty table")
    angles = t.angles
    lo, hi = 0, len(angles)
    # first index whose angle is >= h
    while lo < hi:
        mid = (lo + hi) // 2
        if compare(angles[mid], h) == LT:
            lo = mid + 1
        else:
            hi = mid
    if lo < len(angles) and compare(angles[lo], h) == EQ:
        return AnglePosition.at(lo)
    return AnglePosition.between((lo - 1) % len(angles))


def locate_float(t: HingeTable, radians: float, guard: float = 1e-9) -> AnglePosition:
    """Position of an approximate angle; refuses angles within ``guard`` of a
    hinge since floats cannot decide those."""
    if not t.angles:
        raise TableError("cannot locate in an empty table")
    x = radians % (2 * math.pi)
    floats = [angle_as_float(h) for h in t.angles]
    for j, a in enumerate(floats):
        gap = abs(a - x)
        if min(gap, 2 * math.pi - gap) <= guard:
            raise AmbiguousAngle(t.angles[j], j)
    lo = bisect.bisect_left(floats, x)
    return AnglePosition.between((lo - 1) % len(floats))


class AmbiguousAngle(TableError):
    def __init__(self, hinge: HingeAngle, index: int):
        super().__init__(f"angle is within float precision of hinge {index} ({hinge})")
        self.hinge = hinge
        self.index = index


def interval_witnesses(t: HingeTable, max_m: int | None = None) -> dict[int, HingeAngle]:
    """For each interval ``(a_j, a_{j+1})`` a hinge angle of higher order
    lying strictly inside it.

    At such a witness no point of the radius-``t.m`` disk sits on a
    half-integer, so its discretized rotation is the configuration of the
    whole interval.
    """
    n = len(t.angles)
    found: dict[int, HingeAngle] = {}
    mm = t.m + 1
    limit = max_m if max_m is not None else 8 * max(t.m, 1) + 8
    while len(found) < n and mm <= limit:
        inner = (mm - 1) ** 2
        # only sources in the new annulus; smaller ones were seen already
        for tr in enumerate_triples(mm):
            if tr[0] ** 2 + tr[1] ** 2 <= inner:
                continue
            h = canonicalize(tr)
            if h.order <= t.m * t.m:
                continue
            pos = locate(t, h)
            if pos.index not in found and pos.kind is PositionKind.IN_INTERVAL:
                found[pos.index] = h
        mm += 1
    if len(found) < n:
        raise TableError(f"no witness found for {n - len(found)} intervals up to m={limit}")
    return found


HEADER = "HINGETABLE v1 m={m} n={n}"


def save(t: HingeTable, sink: IO[str]) -> None:
    sink.write(HEADER.format(m=t.m, n=len(t.angles)) + "\n")
    for h in t.angles:
        sink.write(f"{h.p} {h.q} {h.k}\n")


def dumps(t: HingeTable) -> str:
    buf = io.StringIO()
    save(t, buf)
    return buf.getvalue()


def _parse_header(line: str) -> tuple[int, int]:
    parts = line.rstrip("\n").split(" ")
    if len(parts) != 4 or parts[:2] != ["HINGETABLE", "v1"]:
        raise HeaderError(f"bad header: {line!r}")
    try:
        if not (parts[2].startswith("m=") and parts[3].startswith("n=")):
            raise ValueError
        m, n = int(parts[2][2:]), int(parts[3][2:])
    except ValueError:
        raise HeaderError(f"bad header: {line!r}") from None
    if m < 0 or n < 0:
        raise HeaderError(f"bad header: {line!r}")
    return m, n


def load(source: IO[str]) -> HingeTable:
    """Read a table written by :func:`save`, re-checking every invariant."""
    lines = source.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise HeaderError("empty table file")
    m, n = _parse_header(lines[0])
    body = lines[1:]
    if len(body) != n:
        raise HeaderError(f"header announces {n} entries, found {len(body)}")
    angles: list[HingeAngle] = []
    for lineno, line in enumerate(body, start=2):
        try:
            p, q, k = (int(s) for s in line.split(" "))
        except ValueError:
            raise TableError(f"line {lineno}: malformed entry {line!r}") from None
        if not validate(p, q, k) or p * p + q * q > m * m:
            raise RangeError(f"line {lineno}: triple ({p}, {q}, {k}) out of range for m={m}")
        h = canonicalize((p, q, k))
        if h != (p, q, k):
            raise RangeError(f"line {lineno}: triple ({p}, {q}, {k}) is not primary")
        if angles:
            c = compare(angles[-1], h)
            if c == EQ:
                raise DuplicateError(f"line {lineno}: duplicate entry {line!r}")
            if c == GT:
                raise UnsortedError(f"line {lineno}: unsorted entry {line!r}")
        angles.append(h)
    return HingeTable(m, tuple(angles))


def loads(text: str) -> HingeTable:
    return load(io.StringIO(text))
