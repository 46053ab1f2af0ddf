"""Meromorphic differentials on the projective line with exact residues.

A differential is stored by its divisor: ``scale * prod (z - z_i)^m_i dz``
over the finite support points, the order at infinity being
``-2 - sum m_i``.  Residues are Taylor coefficients computed with the
generalized binomial series, so everything stays in :class:`Fraction`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

INF = "inf"
Point = Union[Fraction, str]


class P1Error(ValueError):
    pass


def parse_point(p: object) -> Point:
    if isinstance(p, str) and p.strip().lower() in ("inf", "infinity", "oo", "∞"):
        return INF
    if isinstance(p, float):
        raise P1Error("points must be exact rationals, not floats")
    try:
        return Fraction(p)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise P1Error(f"cannot read point {p!r}") from exc


@dataclass(frozen=True)
class RationalDifferential:
    support: tuple[tuple[Point, int], ...]
    scale: Fraction = Fraction(1)

    @property
    def finite(self) -> list[tuple[Fraction, int]]:
        return [(p, m) for p, m in self.support if p != INF]  # type: ignore[misc]

    @property
    def order_at_infinity(self) -> int:
        return -2 - sum(m for _, m in self.finite)

    def order_at(self, p: object) -> int:
        p = parse_point(p)
        if p == INF:
            return self.order_at_infinity
        for q, m in self.finite:
            if q == p:
                return m
        return 0

    def divisor(self) -> dict[Point, int]:
        out: dict[Point, int] = {p: m for p, m in self.finite}
        inf = self.order_at_infinity
        if inf != 0 or any(p == INF for p, _ in self.support):
            out[INF] = inf
        return out

    def poles(self) -> list[Point]:
        return [p for p, m in self.divisor().items() if m <= -1]


def build_p1_differential(support: Iterable[Sequence[object]], scale: object = 1) -> RationalDifferential:
    pts: list[tuple[Point, int]] = []
    for item in support:
        if len(item) != 2:
            raise P1Error(f"support entries are (point, order) pairs, got {item!r}")
        pts.append((parse_point(item[0]), int(item[1])))  # type: ignore[call-overload]
    seen = [p for p, _ in pts]
    if len(set(seen)) != len(seen):
        raise P1Error("support points must be distinct")
    total = sum(m for _, m in pts)
    has_inf = INF in seen
    if has_inf and total != -2:
        raise P1Error(f"orders sum to {total}, a differential on the line has degree -2")
    scale = Fraction(scale)  # type: ignore[arg-type]
    if scale == 0:
        raise P1Error("scale must be nonzero")
    w = RationalDifferential(tuple(pts), scale)
    if not has_inf and w.order_at_infinity != 0:
        w = RationalDifferential(tuple(pts) + ((INF, w.order_at_infinity),), scale)
    return w


def _binomial_series(m: int, c: Fraction, n: int) -> list[Fraction]:
    """Coefficients of ``(1 + c t)^m`` up to ``t^(n-1)``."""
    out = [Fraction(1)]
    coef = Fraction(1)
    for j in range(1, n):
        coef = coef * (m - j + 1) / j
        out.append(coef * c**j)
    return out


def _mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return out


def residue_at(w: RationalDifferential, p: object) -> Fraction:
    p = parse_point(p)
    order = w.order_at(p)
    if order >= 0:
        return Fraction(0)
    k = -order
    if p == INF:
        # in w = 1/z the form is -scale * w^(order) * prod (1 - z_i w)^m_i dw
        series = [Fraction(1)] + [Fraction(0)] * (k - 1)
        for z, m in w.finite:
            series = _mul(series, _binomial_series(m, -z, k), k)
        return -w.scale * series[k - 1]
    lead = w.scale
    series = [Fraction(1)] + [Fraction(0)] * (k - 1)
    for z, m in w.finite:
        if z == p:
            continue
        c = p - z  # (c + t)^m = c^m (1 + t/c)^m
        lead *= c**m
        series = _mul(series, _binomial_series(m, 1 / c, k), k)
    return lead * series[k - 1]


def residues(w: RationalDifferential) -> dict[Point, Fraction]:
    return {p: residue_at(w, p) for p in w.poles()}


# ----------------------------------------------------------------------
# sampling


def _random_points(rng: random.Random, n: int, spread: int = 30) -> list[Fraction]:
    pts: list[Fraction] = []
    while len(pts) < n:
        x = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
        if x not in pts:
            pts.append(x)
    return pts


@dataclass
class ResidueStats:
    orders: tuple[int, ...]
    trials: int
    all_zero: int
    some_zero: int
    examples: list[dict]


def sample_residue_profiles(orders: Sequence[int], trials: int, seed: int = 0) -> ResidueStats:
    """Place the divisor at random distinct rationals and record which pole residues vanish."""
    orders = tuple(int(m) for m in orders)
    if sum(orders) != -2:
        raise P1Error(f"orders {orders} do not sum to -2")
    rng = random.Random(seed)
    all_zero = some_zero = 0
    examples: list[dict] = []
    pole_idx = [i for i, m in enumerate(orders) if m <= -1]
    for _ in range(trials):
        pts = _random_points(rng, len(orders))
        w = build_p1_differential(list(zip(pts, orders)))
        res = [residue_at(w, pts[i]) for i in pole_idx]
        zeros = sum(1 for r in res if r == 0)
        if pole_idx and zeros == len(res):
            all_zero += 1
            if len(examples) < 3:
                examples.append({"points": pts, "residues": res})
        elif zeros:
            some_zero += 1
    return ResidueStats(orders, trials, all_zero, some_zero, examples)


def realizes_two_pole_residue(signature: Sequence[int], seed: int = 0, attempts: int = 5) -> bool:
    """Find a rational differential with this signature whose two poles have nonzero residue.

    Rescaling such a differential realizes every residue pair ``(r, -r)``
    with ``r`` nonzero.
    """
    orders = [m for m in signature if m != 0]
    poles = [i for i, m in enumerate(orders) if m <= -1]
    if len(poles) != 2 or sum(orders) != -2:
        return False
    rng = random.Random(seed)
    for _ in range(attempts):
        pts = _random_points(rng, len(orders))
        w = build_p1_differential(list(zip(pts, orders)))
        if residue_at(w, pts[poles[0]]) != 0:
            return True
    return False
