"""Hinge angles encoded as integer generating triples.

A triple ``(p, q, k)`` names the angle ``alpha`` for which

    e^{i alpha} (p + q i) = (k + 1/2) + lam i,   lam > 0,

so the source point ``p + q i`` lands on a half-integer abscissa. With
``D = 4(p^2 + q^2) - (2k + 1)^2`` we have ``lam = sqrt(D) / 2`` and

    cos alpha = (p(2k+1) + q sqrt(D)) / (2 r^2)
    sin alpha = (p sqrt(D) - q(2k+1)) / (2 r^2),    r^2 = p^2 + q^2.
"""
from __future__ import annotations

import math
from functools import cmp_to_key
from typing import NamedTuple

from .exact_arith import EQ, GT, LT, SurdValue, surd_compare, surd_sign


class InvalidTriple(ValueError):
    pass


class GeneratingTriple(NamedTuple):
    p: int
    q: int
    k: int

    @property
    def norm(self) -> int:
        """Squared modulus of the source point, ``p^2 + q^2``."""
        return self.p * self.p + self.q * self.q

    @property
    def discriminant(self) -> int:
        """``D = 4(p^2+q^2) - (2k+1)^2``, so that ``2*lam = sqrt(D)``."""
        t = 2 * self.k + 1
        return 4 * self.norm - t * t

    @property
    def source(self) -> tuple[int, int]:
        return (self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p} {self.q} {self.k}"

    @classmethod
    def parse(cls, text: str) -> GeneratingTriple:
        parts = text.replace(",", " ").split()
        if len(parts) != 3:
            raise InvalidTriple(f"expected three integers, got {text!r}")
        return cls(*(int(s) for s in parts))


class HingeAngle(GeneratingTriple):
    """A generating triple in primary form; one value per distinct angle.

    Build these with :func:`canonicalize`; the constructor does not check.
    """

    __slots__ = ()

    @property
    def order(self) -> int:
        return self.norm


class ExactAngleFunctions(NamedTuple):
    """``cos = cos_num / denom`` and ``sin = sin_num / denom``."""

    cos_num: SurdValue
    sin_num: SurdValue
    denom: int


def validate(p: int, q: int, k: int) -> bool:
    return (p, q) != (0, 0) and 4 * (p * p + q * q) > (2 * k + 1) ** 2


def canonicalize(t) -> HingeAngle:
    """Divide out the common odd factor of ``p``, ``q`` and ``2k+1``."""
    p, q, k = t
    if not validate(p, q, k):
        raise InvalidTriple(f"not a generating triple: ({p}, {q}, {k})")
    odd = 2 * k + 1
    g = math.gcd(p, q, odd)
    if g == 1:
        return HingeAngle(p, q, k)
    return HingeAngle(p // g, q // g, (odd // g - 1) // 2)


def exact_functions(h: GeneratingTriple) -> ExactAngleFunctions:
    p, q, k = h
    t = 2 * k + 1
    d = 4 * (p * p + q * q) - t * t
    return ExactAngleFunctions(
        SurdValue(p * t, q, d), SurdValue(-q * t, p, d), 2 * (p * p + q * q)
    )


def _quadrant_of_signs(c: int, s: int) -> int:
    # alpha in [Q*90deg, (Q+1)*90deg)
    if c > 0 and s >= 0:
        return 0
    if c <= 0 and s > 0:
        return 1
    if c < 0 and s <= 0:
        return 2
    return 3


def quadrant(h: GeneratingTriple) -> int:
    f = exact_functions(h)
    return _quadrant_of_signs(surd_sign(f.cos_num), surd_sign(f.sin_num))


def _sign(a: int, b: int, d: int) -> int:
    # sign of a + b*sqrt(d), d > 0
    if b == 0:
        return (a > 0) - (a < 0)
    sb = 1 if b > 0 else -1
    if a == 0 or (a > 0) == (b > 0):
        return sb
    x = a * a - b * b * d
    return ((x > 0) - (x < 0)) * (1 if a > 0 else -1)


def compare(a: GeneratingTriple, b: GeneratingTriple) -> int:
    """Exact order of two hinge angles on ``[0, 2pi)``: LT, EQ or GT.

    Quadrants first; inside a quadrant the cosines are compared, which is a
    sign test on ``A + B1 sqrt(D1) - B2 sqrt(D2)`` with integer coefficients.
    """
    if a == b:
        return EQ
    pa, qa, ka = a
    pb, qb, kb = b
    ta, tb = 2 * ka + 1, 2 * kb + 1
    na, nb = pa * pa + qa * qa, pb * pb + qb * qb
    da, db = 4 * na - ta * ta, 4 * nb - tb * tb
    quad_a = _quadrant_of_signs(_sign(pa * ta, qa, da), _sign(-qa * ta, pa, da))
    quad_b = _quadrant_of_signs(_sign(pb * tb, qb, db), _sign(-qb * tb, pb, db))
    if quad_a != quad_b:
        return LT if quad_a < quad_b else GT
    # cos_a / (2 na) vs cos_b / (2 nb), cross-multiplied
    c = surd_compare(
        SurdValue(pa * ta * nb, qa * nb, da), SurdValue(pb * tb * na, qb * na, db)
    )
    # cos is decreasing on [0, pi] and increasing on [pi, 2pi)
    return -c if quad_a < 2 else c


def sort_key():
    """Key function ordering hinge angles with :func:`compare`."""
    return cmp_to_key(compare)


def angle_as_float(h: GeneratingTriple) -> float:
    """Approximate angle in radians on ``[0, 2pi)``; diagnostics only."""
    f = exact_functions(h)
    a = math.atan2(float(f.sin_num), float(f.cos_num))
    if a < 0:
        a += 2 * math.pi
    if a >= 2 * math.pi:
        a = 0.0
    return a
