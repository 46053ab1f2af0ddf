"""Divisors on elliptic curves over the rationals.

Curves are in short Weierstrass form ``y^2 = x^3 + a x + b``.  Points are
``(x, y)`` pairs of fractions, with ``None`` standing for the point at
infinity ``O``.  By Abel's theorem two divisors on an elliptic curve are
linearly equivalent iff they have the same degree and the same sum under
the group law.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Point = Optional[tuple[Fraction, Fraction]]
O: Point = None


class EllipticError(ValueError):
    pass


@dataclass(frozen=True)
class EllipticCurveQ:
    a: Fraction
    b: Fraction

    def __init__(self, a: object, b: object):
        object.__setattr__(self, "a", Fraction(a))  # type: ignore[arg-type]
        object.__setattr__(self, "b", Fraction(b))  # type: ignore[arg-type]
        if 4 * self.a**3 + 27 * self.b**2 == 0:
            raise EllipticError(f"y^2 = x^3 + {self.a}x + {self.b} is singular")

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return y * y == x**3 + self.a * x + self.b

    def point(self, x: object, y: object) -> Point:
        P = (Fraction(x), Fraction(y))  # type: ignore[arg-type]
        if not self.contains(P):
            raise EllipticError(f"{P} is not on the curve")
        return P


def _require(E: EllipticCurveQ, *pts: Point) -> None:
    for P in pts:
        if not E.contains(P):
            raise EllipticError(f"point {P} is not on y^2 = x^3 + {E.a}x + {E.b}")


def negate(P: Point) -> Point:
    return None if P is None else (P[0], -P[1])


def add_points(E: EllipticCurveQ, P: Point, Q: Point) -> Point:
    _require(E, P, Q)
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 != y2 or y1 == 0:
            return None
        slope = (3 * x1 * x1 + E.a) / (2 * y1)
    else:
        slope = (y2 - y1) / (x2 - x1)
    x3 = slope * slope - x1 - x2
    return (x3, slope * (x1 - x3) - y1)


def multiply(E: EllipticCurveQ, n: int, P: Point) -> Point:
    if n < 0:
        return multiply(E, -n, negate(P))
    result: Point = None
    addend = P
    while n:
        if n & 1:
            result = add_points(E, result, addend)
        addend = add_points(E, addend, addend)
        n >>= 1
    return result


@dataclass(frozen=True)
class DivisorE:
    entries: tuple[tuple[Point, int], ...]

    @classmethod
    def of(cls, entries: Iterable[tuple[Point, int]]) -> DivisorE:
        return cls(tuple((P, int(m)) for P, m in entries))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def total(self, E: EllipticCurveQ) -> Point:
        s: Point = None
        for P, m in self.entries:
            s = add_points(E, s, multiply(E, m, P))
        return s

    def __add__(self, other: DivisorE) -> DivisorE:
        return DivisorE(self.entries + other.entries)


def linearly_equivalent(E: EllipticCurveQ, D1: DivisorE, D2: DivisorE) -> bool:
    return D1.degree == D2.degree and D1.total(E) == D2.total(E)


def check_weierstrass_binary(E1: EllipticCurveQ, zs: DivisorE, qs: Sequence[Point]) -> bool:
    """Whether ``sum m_i z_i ~ 2 sum q_j`` on ``E1``, with ``g - 1 = len(qs)`` nodes."""
    g = len(qs) + 1
    if zs.degree != 2 * g - 2:
        raise EllipticError(f"marked divisor has degree {zs.degree}, expected 2g-2 = {2 * g - 2}")
    return linearly_equivalent(E1, zs, DivisorE.of((q, 2) for q in qs))


def differ_by_two_torsion(E: EllipticCurveQ, z: Point, q: Point) -> bool:
    d = add_points(E, z, negate(q))
    return d is not None and add_points(E, d, d) is None
