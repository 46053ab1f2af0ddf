"""Order data of twisted differentials on a dual graph.

A :class:`TwistedDiffType` assigns an integer order to every half-edge; leg
orders are read from the graph.  Besides the pointwise checks this module
enumerates all types that are compatible with at least one level graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .curve_graph import DualGraph, StratumDescriptor
from .level_order import LevelGraph, enumerate_level_structures


@dataclass(frozen=True)
class TwistedDiffType:
    graph: DualGraph
    half_edge_order: tuple[tuple[str, int], ...]
    _map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_map", dict(self.half_edge_order))

    @classmethod
    def from_mapping(cls, graph: DualGraph, orders: Mapping[str, int]) -> TwistedDiffType:
        hids = [h for e in graph.edges for h in e.half_edges]
        missing = [h for h in hids if h not in orders]
        if missing:
            raise ValueError(f"no order given for half-edges {missing}")
        extra = sorted(set(orders) - set(hids))
        if extra:
            raise ValueError(f"unknown half-edges {extra}")
        return cls(graph, tuple((h, int(orders[h])) for h in hids))

    def __getitem__(self, hid: str) -> int:
        return self._map[hid]

    @property
    def orders(self) -> dict[str, int]:
        return dict(self._map)

    def sort_key(self) -> tuple[int, ...]:
        return tuple(o for _, o in self.half_edge_order)

    def sites_at(self, v: str) -> list[tuple[str, int]]:
        """``(site id, order)`` for every leg and half-edge on ``v``; legs first."""
        g = self.graph
        out = [(leg.id, leg.order) for leg in g.legs_at(v)]
        out.extend((h, self._map[h]) for h in g.incident(v))
        return out

    def signature(self, v: str) -> tuple[int, ...]:
        return tuple(o for _, o in self.sites_at(v))


@dataclass
class CheckReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_type(t: TwistedDiffType, s: StratumDescriptor) -> CheckReport:
    report = CheckReport()
    g = t.graph
    orders = tuple(leg.order for leg in g.legs)
    if s.symmetrize:
        if sorted(orders) != sorted(s.mu):
            report.violations.append(f"leg orders {orders} are not a rearrangement of mu {s.mu}")
    elif orders != s.mu:
        report.violations.append(f"leg orders {orders} differ from mu {s.mu}")
    for e in g.edges:
        a, b = (t[h] for h in e.half_edges)
        if a + b != -2:
            report.violations.append(f"edge {e.id}: orders {a} and {b} do not sum to -2")
    for v, gv in g.vertices:
        deg = sum(t.signature(v))
        if deg != 2 * gv - 2:
            report.violations.append(f"vertex {v}: total order {deg} differs from 2g-2 = {2 * gv - 2}")
    return report


def check_condition3(lg: LevelGraph, t: TwistedDiffType) -> bool:
    """Edge orders are consistent with the levels of their ends."""
    g = t.graph
    for e in g.edges:
        for h in e.half_edges:
            here = lg[g.half_edge(h).vertex]
            there = lg[g.half_edge(g.partner(h)).vertex]
            if (here >= there) != (t[h] >= -1):
                return False
            if (here == there) != (t[h] == -1):
                return False
    return True


@dataclass(frozen=True)
class OrderRelation:
    """Edge-wise relations read off a type: ``strict`` pairs (upper, lower) and ``ties``."""

    strict: tuple[tuple[str, str], ...]
    ties: tuple[tuple[str, str], ...]


def induced_partial_order(t: TwistedDiffType) -> tuple[OrderRelation, list[LevelGraph]]:
    g = t.graph
    strict, ties = [], []
    for e in g.edges:
        h0, h1 = e.half_edges
        u, w = e.ends
        if t[h0] == -1 and t[h1] == -1:
            ties.append((u, w))
        elif t[h0] >= 0:
            strict.append((u, w))
        elif t[h1] >= 0:
            strict.append((w, u))
    rel = OrderRelation(tuple(strict), tuple(ties))
    return rel, compatible_level_graphs(t)


def compatible_level_graphs(t: TwistedDiffType) -> list[LevelGraph]:
    return [lg for lg in enumerate_level_structures(t.graph) if check_condition3(lg, t)]


# ----------------------------------------------------------------------
# enumeration


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def types_for_level_graph(lg: LevelGraph) -> list[TwistedDiffType]:
    """All types satisfying matching orders, degree and the level condition for ``lg``.

    Horizontal edges carry ``(-1, -1)``.  Every other edge carries ``x >= 0``
    on its upper end and ``-2 - x`` on its lower end.  Walking up from the
    bottom level, the degree condition at a vertex fixes the sum of ``x``
    over the edges rising from it, since all edges going down from it were
    fixed earlier.
    """
    g = lg.graph
    horizontal: dict[str, int] = {v: 0 for v in g.vertex_ids}
    rising: dict[str, list] = {v: [] for v in g.vertex_ids}
    falling: dict[str, list] = {v: [] for v in g.vertex_ids}
    for e in g.edges:
        u, w = e.ends
        if lg[u] == lg[w]:
            horizontal[u] += 1
            horizontal[w] += 1
        elif lg[u] > lg[w]:
            rising[w].append(e)
            falling[u].append(e)
        else:
            rising[u].append(e)
            falling[w].append(e)
    order = sorted(g.vertex_ids, key=lambda v: (lg[v], g.vertex_ids.index(v)))
    leg_sum = {v: sum(leg.order for leg in g.legs_at(v)) for v in g.vertex_ids}

    results: list[dict[str, int]] = []

    def step(i: int, upper: dict[str, int]) -> None:
        if i == len(order):
            results.append(dict(upper))
            return
        v = order[i]
        need = (
            sum(upper[e.id] for e in falling[v])
            + leg_sum[v]
            - horizontal[v]
            - 2 * len(rising[v])
            - (2 * g.genus_of(v) - 2)
        )
        if need < 0:
            return
        for comp in _compositions(need, len(rising[v])):
            for e, x in zip(rising[v], comp):
                upper[e.id] = x
            step(i + 1, upper)
        for e in rising[v]:
            upper.pop(e.id, None)

    step(0, {})
    out = []
    for upper in results:
        orders: dict[str, int] = {}
        for e in g.edges:
            h0, h1 = e.half_edges
            u, w = e.ends
            if lg[u] == lg[w]:
                orders[h0] = orders[h1] = -1
            elif lg[u] > lg[w]:
                orders[h0], orders[h1] = upper[e.id], -2 - upper[e.id]
            else:
                orders[h0], orders[h1] = -2 - upper[e.id], upper[e.id]
        out.append(TwistedDiffType.from_mapping(g, orders))
    return out


def enumerate_twisted_types(g: DualGraph, s: StratumDescriptor) -> list[TwistedDiffType]:
    """Types with prescribed leg orders, matching edge orders and correct degrees
    that are compatible with at least one level graph; sorted by half-edge orders."""
    legs = tuple(leg.order for leg in g.legs)
    if (sorted(legs) != sorted(s.mu)) if s.symmetrize else (legs != s.mu):
        return []
    found: dict[tuple[int, ...], TwistedDiffType] = {}
    for lg in enumerate_level_structures(g):
        for t in types_for_level_graph(lg):
            found.setdefault(t.sort_key(), t)
    return [found[k] for k in sorted(found)]


# ----------------------------------------------------------------------
# structural consequences used as sanity checks and pruning


def local_minima(lg: LevelGraph) -> list[str]:
    return [v for v in lg.graph.vertex_ids if lg.is_local_minimum(v)]


def minimum_has_zero_or_point(lg: LevelGraph, t: TwistedDiffType, v: str) -> bool:
    """Whether ``v`` carries a leg or a half-edge of nonnegative order."""
    g = t.graph
    return bool(g.legs_at(v)) or any(t[h] >= 0 for h in g.incident(v))


def unique_minimum_with_leg(lg: LevelGraph) -> bool:
    """For a single-leg stratum: one local minimum, and it carries the leg."""
    mins = local_minima(lg)
    g = lg.graph
    return len(mins) == 1 and len(g.legs) == 1 and g.legs[0].vertex == mins[0]
