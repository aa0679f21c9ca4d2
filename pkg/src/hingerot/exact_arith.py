"""Exact arithmetic on integers and quadratic surds ``a + b*sqrt(d)``.

Everything here works on Python's unbounded ``int``; no floating point is
involved in any decision.
"""
from __future__ import annotations

import math
from typing import NamedTuple

LT, EQ, GT = -1, 0, 1


def isqrt(n: int) -> int:
    """Return ``floor(sqrt(n))`` for a non-negative integer ``n``."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


class SurdValue(NamedTuple):
    """The real number ``a + b*sqrt(d)``.

    The representation is not canonical: ``(3, 0, 7)`` and ``(3, 0, 0)`` are
    the same number. Compare values with :func:`surd_compare`, not ``==``.
    """

    a: int
    b: int = 0
    d: int = 0

    def __neg__(self) -> SurdValue:
        return SurdValue(-self.a, -self.b, self.d)

    def scale(self, c: int) -> SurdValue:
        return SurdValue(c * self.a, c * self.b, self.d)

    def sign(self) -> int:
        return surd_sign(self)

    def floor_div(self, e: int) -> int:
        """``floor((a + b*sqrt(d)) / e)`` for ``e > 0``."""
        if e <= 0:
            raise ValueError("divisor must be positive")
        return (self.a + floor_surd_part(self.b, self.d)) // e

    def __float__(self) -> float:
        return self.a + self.b * math.sqrt(self.d)


def floor_surd_part(b: int, d: int) -> int:
    """``floor(b*sqrt(d))`` exactly."""
    if d < 0:
        raise ValueError("negative radicand")
    s = b * b * d
    r = math.isqrt(s)
    if b >= 0:
        return r
    return -r if r * r == s else -r - 1


def surd_sign(v: SurdValue) -> int:
    """Sign of ``a + b*sqrt(d)`` in {-1, 0, +1}."""
    a, b, d = v
    if d < 0:
        raise ValueError("negative radicand")
    sa = _sgn(a)
    sb = _sgn(b) if d else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger magnitude wins
    return sa * _sgn(a * a - b * b * d)


def surd_compare(x: SurdValue, y: SurdValue) -> int:
    """Order two surds with possibly different radicands: LT, EQ or GT.

    Decides the sign of ``(x.a - y.a) + x.b*sqrt(x.d) - y.b*sqrt(y.d)`` with
    at most two exact squarings.
    """
    if x.d < 0 or y.d < 0:
        raise ValueError("negative radicand")
    a = x.a - y.a
    b1, d1 = x.b, x.d
    b2, d2 = -y.b, y.d
    if d1 == d2:
        return surd_sign(SurdValue(a, b1 + b2, d1))
    # value = u + w with u = a + b1*sqrt(d1), w = b2*sqrt(d2)
    su = surd_sign(SurdValue(a, b1, d1))
    sw = _sgn(b2) if d2 else 0
    if sw == 0:
        return su
    if su == 0 or su == sw:
        return sw
    # |u| vs |w|: u^2 - w^2 = a^2 + b1^2 d1 - b2^2 d2 + 2 a b1 sqrt(d1)
    diff = surd_sign(SurdValue(a * a + b1 * b1 * d1 - b2 * b2 * d2, 2 * a * b1, d1))
    return su * diff
