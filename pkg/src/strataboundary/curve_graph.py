"""Stable pointed dual graphs.

A :class:`DualGraph` records the irreducible components of a nodal curve
(vertices with a geometric genus), its nodes (edges, possibly loops or
parallel) and its marked points (legs carrying the prescribed order).  Each
edge ``e`` joining ``u`` to ``w`` owns two half-edges ``"e:0"`` on ``u`` and
``"e:1"`` on ``w``.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

DEFAULT_CAP_VERTICES = 6
DEFAULT_CAP_EDGES = 8


class InvalidGraphError(ValueError):
    """Raised when an operation needs a well-formed graph and gets something else."""


class CapExceededError(ValueError):
    """A search was asked to go beyond the configured size caps."""

    def __init__(self, what: str, requested: int, cap: int):
        super().__init__(f"{what}={requested} exceeds the search cap {cap}")
        self.what = what
        self.requested = requested
        self.cap = cap


def search_caps() -> tuple[int, int]:
    """Vertex and edge caps, overridable through the environment."""
    v = int(os.environ.get("STRATA_CAP_VERTICES", DEFAULT_CAP_VERTICES))
    e = int(os.environ.get("STRATA_CAP_EDGES", DEFAULT_CAP_EDGES))
    return v, e


def check_caps(max_vertices: int, max_edges: int, caps: tuple[int, int] | None = None) -> None:
    cap_v, cap_e = caps if caps is not None else search_caps()
    if max_vertices > cap_v:
        raise CapExceededError("max_vertices", max_vertices, cap_v)
    if max_edges > cap_e:
        raise CapExceededError("max_edges", max_edges, cap_e)


@dataclass(frozen=True)
class HalfEdge:
    id: str
    vertex: str
    partner: str


@dataclass(frozen=True)
class Leg:
    id: str
    vertex: str
    order: int


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]

    @property
    def half_edges(self) -> tuple[str, str]:
        return (f"{self.id}:0", f"{self.id}:1")

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class StratumDescriptor:
    """Genus and ordered zero/pole profile ``mu`` of a stratum."""

    genus: int
    mu: tuple[int, ...]
    symmetrize: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(int(m) for m in self.mu))
        if self.genus < 0:
            raise ValueError(f"genus must be nonnegative, got {self.genus}")
        if sum(self.mu) != 2 * self.genus - 2:
            raise ValueError(f"sum of mu {self.mu} is {sum(self.mu)}, expected 2g-2 = {2 * self.genus - 2}")

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def polar_part(self) -> tuple[int, ...]:
        return tuple(m for m in self.mu if m < 0)

    @property
    def is_holomorphic(self) -> bool:
        return all(m >= 0 for m in self.mu)


@dataclass(frozen=True)
class DualGraph:
    """Dual graph of a stable pointed curve.

    ``vertices`` is an ordered tuple of ``(id, genus)``; ``legs`` follow the
    order of the marked points.
    """

    vertices: tuple[tuple[str, int], ...]
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()
    _genus: dict = field(init=False, repr=False, compare=False, hash=False)
    _half: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_genus", dict(self.vertices))
        if len(self._genus) != len(self.vertices):
            raise InvalidGraphError("vertex ids must be distinct")
        if any(g < 0 for g in self._genus.values()):
            raise InvalidGraphError("vertex genera must be nonnegative")
        for kind, ids in (("edge", [e.id for e in self.edges]), ("leg", [leg.id for leg in self.legs])):
            if len(set(ids)) != len(ids):
                raise InvalidGraphError(f"{kind} ids must be distinct")
        for e in self.edges:
            for v in e.ends:
                if v not in self._genus:
                    raise InvalidGraphError(f"edge {e.id} ends at unknown vertex {v}")
        for leg in self.legs:
            if leg.vertex not in self._genus:
                raise InvalidGraphError(f"leg {leg.id} sits on unknown vertex {leg.vertex}")
        half: dict[str, HalfEdge] = {}
        for e in self.edges:
            h0, h1 = e.half_edges
            half[h0] = HalfEdge(h0, e.ends[0], h1)
            half[h1] = HalfEdge(h1, e.ends[1], h0)
        object.__setattr__(self, "_half", half)

    @classmethod
    def build(
        cls,
        vertices: Mapping[str, int] | Sequence[tuple[str, int]],
        edges: Iterable[tuple[str, str, str]] = (),
        legs: Iterable[tuple[str, str, int]] = (),
    ) -> DualGraph:
        """Convenience constructor: ``edges`` as ``(id, u, w)``, legs as ``(id, vertex, order)``."""
        verts = tuple(vertices.items()) if isinstance(vertices, Mapping) else tuple(vertices)
        return cls(
            vertices=tuple((str(v), int(g)) for v, g in verts),
            edges=tuple(Edge(str(i), (str(u), str(w))) for i, u, w in edges),
            legs=tuple(Leg(str(i), str(v), int(m)) for i, v, m in legs),
        )

    # -- lookups ---------------------------------------------------------
    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    def genus_of(self, v: str) -> int:
        return self._genus[v]

    @property
    def half_edges(self) -> tuple[HalfEdge, ...]:
        return tuple(self._half.values())

    def half_edge(self, hid: str) -> HalfEdge:
        return self._half[hid]

    def partner(self, hid: str) -> str:
        return self._half[hid].partner

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def incident(self, v: str) -> list[str]:
        """Half-edges sitting on ``v`` (a loop contributes both of its ends)."""
        return [h.id for h in self._half.values() if h.vertex == v]

    def legs_at(self, v: str) -> list[Leg]:
        return [leg for leg in self.legs if leg.vertex == v]

    def valence(self, v: str) -> int:
        return len(self.incident(v)) + len(self.legs_at(v))

    def neighbours(self, v: str) -> set[str]:
        out = set()
        for e in self.edges:
            if e.ends[0] == v:
                out.add(e.ends[1])
            if e.ends[1] == v:
                out.add(e.ends[0])
        return out

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def has_loop(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def components(self, vertices: Iterable[str] | None = None, edges: Iterable[Edge] | None = None) -> list[frozenset[str]]:
        """Connected components of the subgraph spanned by ``vertices`` and ``edges``."""
        verts = list(self.vertex_ids if vertices is None else vertices)
        keep = set(verts)
        adj: dict[str, set[str]] = {v: set() for v in verts}
        for e in self.edges if edges is None else edges:
            u, w = e.ends
            if u in keep and w in keep:
                adj[u].add(w)
                adj[w].add(u)
        seen: set[str] = set()
        comps = []
        for v in verts:
            if v in seen:
                continue
            stack, comp = [v], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and len(self.components()) == 1

    def is_separating(self, eid: str) -> bool:
        e = self.edge(eid)
        if e.is_loop:
            return False
        rest = [x for x in self.edges if x.id != eid]
        return len(self.components(edges=rest)) > 1


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def arithmetic_genus(g: DualGraph) -> int:
    """``sum g_v + #edges - #vertices + 1``; the graph must be connected."""
    if not g.is_connected():
        raise InvalidGraphError("arithmetic genus needs a connected, nonempty graph")
    return sum(gv for _, gv in g.vertices) + g.num_edges - g.num_vertices + 1


def validate_dual_graph(g: DualGraph, s: StratumDescriptor) -> ValidationReport:
    report = ValidationReport()
    bad = report.violations
    if not g.vertices:
        bad.append("graph has no vertices")
        return report
    # duplicate ids and dangling ends are refused when the graph is built
    if not g.is_connected():
        bad.append("graph is not connected")
    for v, gv in g.vertices:
        val = g.valence(v)
        if gv == 0 and val < 3:
            bad.append(f"vertex {v} of genus 0 is unstable (valence {val} < 3)")
        elif gv == 1 and val < 1:
            bad.append(f"vertex {v} of genus 1 is unstable (valence 0)")
    if g.is_connected():
        ag = arithmetic_genus(g)
        if ag != s.genus:
            bad.append(f"arithmetic genus {ag} differs from stratum genus {s.genus}")
    orders = tuple(leg.order for leg in g.legs)
    if s.symmetrize:
        if sorted(orders) != sorted(s.mu):
            bad.append(f"leg orders {orders} do not match mu {s.mu} as a multiset")
    elif orders != s.mu:
        bad.append(f"leg orders {orders} do not match mu {s.mu}")
    return report


# ----------------------------------------------------------------------
# canonical forms

VertexKey = Callable[[str], Hashable]
HalfKey = Callable[[str], Hashable]


def canonical_labeling(
    g: DualGraph,
    vertex_key: VertexKey,
    half_key: HalfKey | None = None,
) -> tuple[tuple, tuple[str, ...]]:
    """Minimal encoding of ``g`` over all vertex orders, and one optimal order.

    ``vertex_key`` decorates vertices (genus, legs, level, ...), ``half_key``
    decorates half-edges (orders, ...).  Two decorated graphs are isomorphic
    iff their encodings agree.  Vertices are first split into cells by an
    isomorphism invariant; only orders respecting the cells are tried.
    """
    hk = half_key or (lambda h: 0)
    base = {v: vertex_key(v) for v in g.vertex_ids}

    def refine(keys: dict[str, Hashable]) -> dict[str, Hashable]:
        out = {}
        for v in g.vertex_ids:
            nb = []
            for hid in g.incident(v):
                other = g.half_edge(g.partner(hid))
                nb.append((repr(hk(hid)), repr(hk(other.id)), repr(keys[other.vertex])))
            out[v] = (keys[v], tuple(sorted(nb)))
        return out

    inv = base
    for _ in range(2):
        inv = refine(inv)
    cells: dict[str, list[str]] = defaultdict(list)
    for v in g.vertex_ids:
        cells[repr(inv[v])].append(v)
    ordered_cells = [cells[k] for k in sorted(cells)]

    best: tuple | None = None
    best_order: tuple[str, ...] = ()
    for choice in itertools.product(*(itertools.permutations(c) for c in ordered_cells)):
        order = tuple(v for cell in choice for v in cell)
        enc = _encode(g, order, base, hk)
        if best is None or enc < best:
            best, best_order = enc, order
    assert best is not None
    return best, best_order


def _encode(g: DualGraph, order: Sequence[str], base: Mapping[str, Hashable], hk: HalfKey) -> tuple:
    idx = {v: i for i, v in enumerate(order)}
    verts = tuple(repr(base[v]) for v in order)
    edges = []
    for e in g.edges:
        h0, h1 = e.half_edges
        a = (idx[e.ends[0]], repr(hk(h0)))
        b = (idx[e.ends[1]], repr(hk(h1)))
        edges.append((a, b) if a <= b else (b, a))
    return (verts, tuple(sorted(edges)))


def leg_key(g: DualGraph, symmetrize: bool) -> Callable[[Leg], Hashable]:
    if symmetrize:
        return lambda leg: leg.order
    index = {leg.id: i for i, leg in enumerate(g.legs)}
    return lambda leg: (index[leg.id], leg.order)


def graph_canonical_form(g: DualGraph, symmetrize: bool = False) -> tuple:
    lk = leg_key(g, symmetrize)
    return canonical_labeling(g, lambda v: (g.genus_of(v), tuple(sorted(lk(x) for x in g.legs_at(v)))))[0]


def relabel(g: DualGraph, order: Sequence[str]) -> tuple[DualGraph, dict[str, str], dict[str, str]]:
    """Rename vertices ``v0, v1, ...`` along ``order`` and edges ``e0, e1, ...`` canonically.

    Returns the new graph plus the vertex and half-edge renaming maps.
    """
    vmap = {v: f"v{i}" for i, v in enumerate(order)}
    idx = {v: i for i, v in enumerate(order)}
    keyed = []
    for e in g.edges:
        a, b = idx[e.ends[0]], idx[e.ends[1]]
        keyed.append(((a, b) if a <= b else (b, a), a > b, e))
    keyed.sort(key=lambda t: (t[0], t[2].id))
    hmap: dict[str, str] = {}
    new_edges = []
    for i, (_, flipped, e) in enumerate(keyed):
        nid = f"e{i}"
        h0, h1 = e.half_edges
        if flipped:
            hmap[h0], hmap[h1] = f"{nid}:1", f"{nid}:0"
            new_edges.append(Edge(nid, (vmap[e.ends[1]], vmap[e.ends[0]])))
        else:
            hmap[h0], hmap[h1] = f"{nid}:0", f"{nid}:1"
            new_edges.append(Edge(nid, (vmap[e.ends[0]], vmap[e.ends[1]])))
    graph = DualGraph(
        vertices=tuple((vmap[v], g.genus_of(v)) for v in order),
        edges=tuple(new_edges),
        legs=tuple(Leg(leg.id, vmap[leg.vertex], leg.order) for leg in g.legs),
    )
    return graph, vmap, hmap


def are_isomorphic(a: DualGraph, b: DualGraph, symmetrize: bool = False) -> bool:
    return graph_canonical_form(a, symmetrize) == graph_canonical_form(b, symmetrize)


# ----------------------------------------------------------------------
# enumeration


def _multisets(pairs: Sequence[tuple[int, int]], k: int) -> Iterator[tuple[tuple[int, int], ...]]:
    return itertools.combinations_with_replacement(pairs, k)


def _genus_splits(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _genus_splits(total - first, parts - 1):
            yield (first,) + rest


def enumerate_stable_graphs(
    s: StratumDescriptor,
    max_vertices: int,
    max_edges: int,
    caps: tuple[int, int] | None = None,
) -> list[DualGraph]:
    """All stable pointed graphs of genus ``s.genus`` carrying the legs of ``s.mu``.

    Results are up to isomorphism respecting leg labels (or only leg orders
    when ``s.symmetrize``), relabelled canonically and sorted by
    ``(#vertices, #edges, canonical form)``.
    """
    if max_vertices < 1 or max_edges < 0:
        raise ValueError("bounds must be at least 1 vertex and 0 edges")
    check_caps(max_vertices, max_edges, caps)
    n = s.n
    found: dict[tuple, DualGraph] = {}
    for nv in range(1, max_vertices + 1):
        verts = [f"v{i}" for i in range(nv)]
        pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
        max_e = min(max_edges, s.genus + nv - 1)
        for ne in range(nv - 1, max_e + 1):
            loops = ne - nv + 1
            total_g = s.genus - loops
            if total_g < 0:
                continue
            for edge_set in _multisets(pairs, ne):
                if not _connected(nv, edge_set):
                    continue
                degree = Counter()
                for i, j in edge_set:
                    degree[i] += 1
                    degree[j] += 1
                for genera in _genus_splits(total_g, nv):
                    if genera != tuple(sorted(genera, reverse=True)) and nv > 1:
                        # vertex labels are arbitrary; fix genus order up front
                        continue
                    need = [max(0, (3 if gv == 0 else 1 if gv == 1 else 0) - degree[i]) for i, gv in enumerate(genera)]
                    if sum(need) > n:
                        continue
                    for placement in itertools.product(range(nv), repeat=n):
                        cnt = Counter(placement)
                        if any(cnt[i] < need[i] for i in range(nv)):
                            continue
                        graph = DualGraph.build(
                            list(zip(verts, genera)),
                            [(f"e{k}", verts[i], verts[j]) for k, (i, j) in enumerate(edge_set)],
                            [(f"z{k + 1}", verts[placement[k]], m) for k, m in enumerate(s.mu)],
                        )
                        key = graph_canonical_form(graph, s.symmetrize)
                        if key not in found:
                            found[key] = graph
    out = []
    for key, graph in found.items():
        lk = leg_key(graph, s.symmetrize)
        _, order = canonical_labeling(
            graph, lambda v, gr=graph: (gr.genus_of(v), tuple(sorted(lk(x) for x in gr.legs_at(v))))
        )
        out.append((graph.num_vertices, graph.num_edges, key, relabel(graph, order)[0]))
    out.sort(key=lambda t: (t[0], t[1], repr(t[2])))
    return [t[3] for t in out]


def _connected(nv: int, edge_set: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(nv))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edge_set:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(nv)}) == 1
