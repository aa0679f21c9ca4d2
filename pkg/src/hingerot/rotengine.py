"""Incremental discretized rotation of the disk ``|z| <= m`` of Gaussian
integers.

Gaussian integers are plain ``(x, y)`` tuples. The rotation map is advanced
one *phase* at a time. Crossing the hinge angle ``a_j`` takes two phases:

* entering ``AT_HINGE(j)`` moves the rays ``Q = 2, 3`` (their crossing
  coordinate increases through a half-integer, and ``floor(x + 1/2)`` jumps
  as soon as it gets there);
* leaving for ``IN_INTERVAL(j)`` moves the rays ``Q = 0, 1`` (crossing
  coordinate decreasing, so the rounding only changes once past it).

A point ``(2l+1) i^Q z_s`` of ray ``Q`` moves by ``i^(Q+2)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, NamedTuple, Optional

from .exact_arith import SurdValue, surd_sign
from .hinge import GeneratingTriple, HingeAngle
from .table import AnglePosition, HingeTable, PositionKind, build, locate

Gaussian = tuple[int, int]

UNITS: tuple[Gaussian, ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))


class EngineError(ValueError):
    pass


class Phase(enum.Enum):
    AT_HINGE = "at"
    AFTER_HINGE = "after"


class Side(enum.Enum):
    AT = "at"
    JUST_AFTER = "after"
    JUST_BEFORE = "before"


def unit(n: int) -> Gaussian:
    """``i**n``."""
    return UNITS[n % 4]


def times_unit(z: Gaussian, n: int) -> Gaussian:
    x, y = z
    n %= 4
    if n == 0:
        return (x, y)
    if n == 1:
        return (-y, x)
    if n == 2:
        return (-x, -y)
    return (y, -x)


def ray_delta(quarter: int) -> Gaussian:
    """Displacement of a point on ray ``i^quarter * z_s`` as the hinge is
    crossed."""
    return unit(quarter + 2)


def gaussian_disk(m: int) -> list[Gaussian]:
    """Gaussian integers of modulus ``<= m`` in lexicographic order."""
    mm = m * m
    return [(x, y) for x in range(-m, m + 1) for y in range(-m, m + 1) if x * x + y * y <= mm]


def ray_points(h: GeneratingTriple, quarter: int, m: int) -> list[Gaussian]:
    """``(2l+1) i^quarter z_s`` for ``l = 0, 1, ...`` while inside the disk."""
    sx, sy = times_unit((h[0], h[1]), quarter)
    n = sx * sx + sy * sy
    mm = m * m
    out = []
    j = 1
    while j * j * n <= mm:
        out.append((j * sx, j * sy))
        j += 2
    return out


class RayUpdate(NamedTuple):
    hinge: HingeAngle
    phase: Phase
    touched: tuple[tuple[Gaussian, Gaussian], ...]
    start: AnglePosition
    end: AnglePosition


@dataclass(frozen=True)
class MapView:
    """Read-only live view handed to sweep observers. Copy ``mapping`` with
    ``dict(view.mapping)`` to keep a snapshot."""

    m: int
    mapping: Mapping[Gaussian, Gaussian]
    position: Optional[AnglePosition]


@dataclass
class RotationMap:
    m: int
    mapping: dict[Gaussian, Gaussian]
    position: Optional[AnglePosition]
    updates: int = field(default=0, compare=False)

    def view(self) -> MapView:
        return MapView(self.m, MappingProxyType(self.mapping), self.position)

    def copy(self) -> RotationMap:
        return RotationMap(self.m, dict(self.mapping), self.position, self.updates)

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())


def identity_map(m: int, table: HingeTable | None = None) -> RotationMap:
    """The map at angle 0, positioned in the interval that wraps through 0."""
    if m < 0:
        raise EngineError("m must be non-negative")
    if table is None:
        table = build(m)
    elif table.m != m:
        raise EngineError(f"table is for m={table.m}, map for m={m}")
    pos = AnglePosition.between(len(table) - 1) if len(table) else None
    return RotationMap(m, {z: z for z in gaussian_disk(m)}, pos)


def next_update(r: RotationMap, t: HingeTable) -> RayUpdate:
    """The phase that moves ``r`` to its next position; ``r`` is untouched."""
    if r.m != t.m:
        raise EngineError(f"table is for m={t.m}, map for m={r.m}")
    if not len(t) or r.position is None:
        raise EngineError("no hinge angles to advance through")
    kind, j = r.position
    if kind is PositionKind.IN_INTERVAL:
        nxt = t.successor(j)
        h, phase, quarters = t[nxt], Phase.AT_HINGE, (2, 3)
        end = AnglePosition.at(nxt)
    else:
        h, phase, quarters = t[j], Phase.AFTER_HINGE, (0, 1)
        end = AnglePosition.between(j)
    touched = tuple(
        (z, ray_delta(quarter)) for quarter in quarters for z in ray_points(h, quarter, r.m)
    )
    return RayUpdate(h, phase, touched, r.position, end)


def apply_update(r: RotationMap, u: RayUpdate) -> None:
    if r.position != u.start:
        raise EngineError(f"update starts at {u.start}, map is at {r.position}")
    mapping = r.mapping
    for z, (dx, dy) in u.touched:
        x, y = mapping[z]
        mapping[z] = (x + dx, y + dy)
    r.position = u.end
    r.updates += len(u.touched)


def step(r: RotationMap, t: HingeTable) -> RayUpdate:
    """Advance ``r`` by one phase in place and return the applied update."""
    u = next_update(r, t)
    apply_update(r, u)
    return u


def sweep(
    m: int,
    t: HingeTable,
    observer: Callable[[MapView, HingeAngle, Phase], None] | None = None,
) -> RotationMap:
    """Run a full turn from the identity: ``2 * len(t)`` phases.

    ``observer`` is called after every phase with a live read-only view.
    Returns the final map, which is the identity again.
    """
    r = identity_map(m, t)
    for _ in range(2 * len(t)):
        u = step(r, t)
        if observer is not None:
            observer(r.view(), u.hinge, u.phase)
    return r


def rotated_coordinates(z: Gaussian, h: GeneratingTriple) -> tuple[SurdValue, SurdValue, int]:
    """``z * e^{i alpha}`` as ``(re_num, im_num, denom)``, each component
    being ``(a + b sqrt(D)) / denom``."""
    x, y = z
    p, q, k = h
    t = 2 * k + 1
    n = p * p + q * q
    d = 4 * n - t * t
    dot, cross = x * p + y * q, x * q - y * p
    return SurdValue(t * dot, cross, d), SurdValue(-t * cross, dot, d), 2 * n


def _round(u: SurdValue, e: int, rate_sign: int, side: Side) -> int:
    # floor(u/e + 1/2), with one-sided limits at exact half-integers
    shifted = SurdValue(2 * u.a + e, 2 * u.b, u.d)
    n = shifted.floor_div(2 * e)
    on_half = u.b == 0 and shifted.a % (2 * e) == 0
    if not on_half or side is Side.AT:
        return n
    if side is Side.JUST_AFTER:
        return n if rate_sign > 0 else n - 1
    return n - 1 if rate_sign > 0 else n


def rotate_point_exact(z: Gaussian, h: GeneratingTriple, side: Side = Side.AT) -> Gaussian:
    """``floor(z e^{i alpha} + (1+i)/2)`` at the hinge angle ``h`` (or just
    after/before it), decided with exact surd signs."""
    re, im, e = rotated_coordinates(z, h)
    # d(Re)/d(alpha) = -Im, d(Im)/d(alpha) = Re
    rx = _round(re, e, -surd_sign(im), side)
    ry = _round(im, e, surd_sign(re), side)
    return (rx, ry)


def full_map_exact(
    m: int, h: GeneratingTriple, side: Side = Side.AT, table: HingeTable | None = None
) -> RotationMap:
    """Direct (non-incremental) discretized rotation of the whole disk.

    With ``table`` the result carries the matching position.
    """
    mapping = {z: rotate_point_exact(z, h, side) for z in gaussian_disk(m)}
    pos = None
    if table is not None and len(table):
        kind, j = locate(table, h)
        if kind is PositionKind.AT_HINGE:
            if side is Side.AT:
                pos = AnglePosition.at(j)
            elif side is Side.JUST_AFTER:
                pos = AnglePosition.between(j)
            else:
                pos = AnglePosition.between((j - 1) % len(table))
        else:
            pos = AnglePosition.between(j)
    return RotationMap(m, mapping, pos)
