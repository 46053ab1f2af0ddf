"""Level graphs: dual graphs with a full order (with ties) on the vertices.

Levels are normalized to the consecutive integers ``0, -1, ..., -(k-1)`` so
that every full order has exactly one representative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .curve_graph import DualGraph, Edge


class LevelError(ValueError):
    pass


@dataclass(frozen=True)
class LevelGraph:
    graph: DualGraph
    level: tuple[tuple[str, int], ...]
    _map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        lv = dict(self.level)
        object.__setattr__(self, "_map", lv)
        if set(lv) != set(self.graph.vertex_ids):
            raise LevelError("level function must be defined on exactly the vertices of the graph")
        values = sorted(set(lv.values()), reverse=True)
        if values != list(range(0, -len(values), -1)):
            raise LevelError(f"levels {values} are not normalized to 0, -1, ..., -(k-1)")

    @classmethod
    def from_mapping(cls, graph: DualGraph, level: Mapping[str, int], normalize: bool = False) -> LevelGraph:
        lv = {v: int(level[v]) for v in graph.vertex_ids if v in level}
        if normalize and lv:
            lv = normalize_levels(lv)
        return cls(graph, tuple((v, lv[v]) for v in graph.vertex_ids if v in lv))

    def __getitem__(self, v: str) -> int:
        return self._map[v]

    @property
    def levels(self) -> dict[str, int]:
        return dict(self._map)

    @property
    def num_levels(self) -> int:
        return len(set(self._map.values()))

    @property
    def level_values(self) -> list[int]:
        """Distinct levels from the top down."""
        return sorted(set(self._map.values()), reverse=True)

    def top_vertices(self) -> list[str]:
        return [v for v in self.graph.vertex_ids if self._map[v] == 0]

    def bottom_level(self) -> int:
        return min(self._map.values())

    def is_horizontal(self, e: Edge) -> bool:
        return self._map[e.ends[0]] == self._map[e.ends[1]]

    # -- truncations -----------------------------------------------------
    def above(self, L: int) -> GraphView:
        return self._view(lambda x: x > L)

    def at_level(self, L: int) -> GraphView:
        return self._view(lambda x: x == L)

    def above_or_at(self, L: int) -> GraphView:
        return self._view(lambda x: x >= L)

    def below(self, L: int) -> GraphView:
        return self._view(lambda x: x < L)

    def _view(self, keep) -> GraphView:
        verts = tuple(v for v in self.graph.vertex_ids if keep(self._map[v]))
        vs = set(verts)
        edges = tuple(e for e in self.graph.edges if e.ends[0] in vs and e.ends[1] in vs)
        return GraphView(verts, edges)

    def is_local_minimum(self, v: str) -> bool:
        """No neighbour of ``v`` lies strictly below it (non-strict local minimum)."""
        return all(self._map[w] >= self._map[v] for w in self.graph.neighbours(v))


@dataclass(frozen=True)
class GraphView:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class ComponentAbove:
    """A connected component of the graph strictly above some level ``L``.

    ``edges_to_level`` holds ``(edge id, lower half-edge id)`` for the edges
    joining the component to vertices at level exactly ``L``;
    ``edges_below`` those reaching strictly lower.
    """

    vertices: frozenset[str]
    edges_to_level: tuple[tuple[str, str], ...]
    edges_below: tuple[tuple[str, str], ...]
    has_marked_pole: bool


def normalize_levels(level: Mapping[str, int]) -> dict[str, int]:
    values = sorted(set(level.values()), reverse=True)
    rank = {x: -i for i, x in enumerate(values)}
    return {v: rank[x] for v, x in level.items()}


def weak_orders(items: list[str]) -> Iterator[dict[str, int]]:
    """All normalized level functions on ``items`` (ordered set partitions)."""
    n = len(items)
    if n == 0:
        yield {}
        return
    for k in range(1, n + 1):
        for labels in itertools.product(range(k), repeat=n):
            if len(set(labels)) == k:
                yield {v: -lab for v, lab in zip(items, labels)}


def enumerate_level_structures(g: DualGraph) -> list[LevelGraph]:
    """Every full order with ties on the vertices, by number of levels then lexicographically."""
    return [LevelGraph.from_mapping(g, lv) for lv in weak_orders(list(g.vertex_ids))]


def subgraph_above(lg: LevelGraph, L: int) -> GraphView:
    return lg.above(L)


def connected_components_above(lg: LevelGraph, L: int) -> list[ComponentAbove]:
    g = lg.graph
    view = lg.above(L)
    if not view.vertices:
        return []
    out = []
    for comp in g.components(view.vertices, view.edges):
        to_level, below = [], []
        for e in g.edges:
            for h_up, h_down in (e.half_edges, e.half_edges[::-1]):
                up = g.half_edge(h_up).vertex
                down = g.half_edge(h_down).vertex
                if up in comp and down not in comp:
                    if lg[down] == L:
                        to_level.append((e.id, h_down))
                    elif lg[down] < L:
                        below.append((e.id, h_down))
        pole = any(leg.order < 0 and leg.vertex in comp for leg in g.legs)
        ordered = frozenset(comp)
        out.append(ComponentAbove(ordered, tuple(to_level), tuple(below), pole))
    out.sort(key=lambda c: min(g.vertex_ids.index(v) for v in c.vertices))
    return out
