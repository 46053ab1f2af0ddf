"""Dimension bookkeeping and enumeration of boundary loci of a stratum.

A boundary locus is a triple (dual graph, level graph, twisted type) whose
residue system is solvable.  Its dimension is estimated as

    sum over vertices of dim OmegaM(signature of v)
    - number of levels
    - rank of the pairing and GRC rows beyond the residue-theorem rows.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .curve_graph import (
    DualGraph,
    StratumDescriptor,
    canonical_labeling,
    check_caps,
    enumerate_stable_graphs,
    leg_key,
)
from .elliptic_divisor import DivisorE, EllipticCurveQ, Point
from .level_order import LevelGraph
from .residues import (
    INFEASIBLE,
    Feasibility,
    ResidueSystem,
    build_residue_system,
    feasible_residues,
    grade,
    membership_candidates,
)
from .twisted_type import TwistedDiffType, compatible_level_graphs, enumerate_twisted_types, unique_minimum_with_leg

RATIONAL_BRIDGE = "rational component with a unique zero and separating polar nodes"
NO_UNIQUE_MINIMUM = "single-zero stratum needs a unique local minimum carrying the marked point"


@dataclass(frozen=True)
class SignatureOfVertex:
    genus: int
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.orders) != 2 * self.genus - 2:
            raise ValueError(f"orders {self.orders} do not sum to 2g-2 = {2 * self.genus - 2}")


def stratum_dimension(sig: SignatureOfVertex | StratumDescriptor, projectivized: bool = False) -> int:
    if isinstance(sig, StratumDescriptor):
        genus, orders = sig.genus, sig.mu
    else:
        genus, orders = sig.genus, sig.orders
    if sum(orders) != 2 * genus - 2:
        raise ValueError(f"orders {tuple(orders)} do not sum to 2g-2 = {2 * genus - 2}")
    n = len(orders)
    dim = 2 * genus - 1 + n if all(m >= 0 for m in orders) else 2 * genus - 2 + n
    return dim - 1 if projectivized else dim


def divisorial_target(s: StratumDescriptor) -> int:
    return stratum_dimension(s, projectivized=True) - 1


@dataclass
class BoundaryStratumRecord:
    graph: DualGraph
    level_graph: LevelGraph
    twisted_type: TwistedDiffType
    feasibility: Feasibility
    system: ResidueSystem
    dim: int = 0
    pi2_fiber_dim: int = 0
    grc_extra_rank: int = 0
    extra_rank: int = 0
    tags: list[str] = field(default_factory=list)

    @property
    def dominated(self) -> bool:
        return "dominated" in self.tags

    def signatures(self) -> dict[str, SignatureOfVertex]:
        t = self.twisted_type
        return {v: SignatureOfVertex(gv, t.signature(v)) for v, gv in self.graph.vertices}


@dataclass(frozen=True)
class Rejection:
    graph: DualGraph
    level_graph: LevelGraph
    twisted_type: TwistedDiffType
    reason: str
    detail: str


def locus_dimension(rec: BoundaryStratumRecord) -> int:
    if not rec.feasibility.feasible:
        raise ValueError("dimension is only defined for feasible records")
    total = sum(stratum_dimension(sig) for sig in rec.signatures().values())
    return total - rec.level_graph.num_levels - rec.system.extra_rank()


def top_components(lg: LevelGraph) -> int:
    view = lg.at_level(0)
    return len(lg.graph.components(view.vertices, view.edges))


def pi2_fiber_dimension(g: DualGraph, s: StratumDescriptor, seed: int = 0) -> int:
    """One less than the largest number of top-level components over feasible configurations."""
    feasible = [c for c in membership_candidates(g, s, seed) if c.feasibility.feasible]
    if not feasible:
        raise ValueError("graph carries no feasible configuration; the preimage is empty")
    return max(top_components(c.level_graph) for c in feasible) - 1


def is_dominated(g: DualGraph) -> bool:
    """The graph arises from a smaller one by adding a loop at some vertex."""
    return g.has_loop() and g.num_edges >= 2


def rational_bridge(g: DualGraph, t: TwistedDiffType, s: StratumDescriptor) -> str | None:
    """A rational component of a holomorphic stratum with one zero whose nodes are
    all separating poles; GRC then kills all of its residues."""
    if not s.is_holomorphic:
        return None
    for v, gv in g.vertices:
        if gv != 0:
            continue
        hs = g.incident(v)
        edges = {h.split(":")[0] for h in hs}
        if len(hs) < 2 or any(g.edge(e).is_loop or not g.is_separating(e) for e in edges):
            continue
        zeros = [o for _, o in t.sites_at(v) if o > 0]
        if len(zeros) == 1 and all(t[h] <= -1 for h in hs):
            return f"vertex {v}"
    return None


def canonical_record_key(g: DualGraph, lg: LevelGraph, t: TwistedDiffType, symmetrize: bool = False) -> tuple:
    lk = leg_key(g, symmetrize)
    return canonical_labeling(
        g,
        lambda v: (g.genus_of(v), lg[v], tuple(sorted(lk(x) for x in g.legs_at(v)))),
        lambda h: t[h],
    )[0]


@dataclass
class BoundaryReport:
    stratum: StratumDescriptor
    records: list[BoundaryStratumRecord]
    rejected: list[Rejection]
    target: int

    def divisorial(self) -> list[BoundaryStratumRecord]:
        return [r for r in self.records if r.dim == self.target and not r.dominated]

    def counts_by_dimension(self) -> dict[int, int]:
        return dict(sorted(Counter(r.dim for r in self.records).items(), reverse=True))


def enumerate_boundary(
    s: StratumDescriptor,
    max_vertices: int,
    max_edges: int,
    seed: int = 0,
    prune: bool = True,
    caps: tuple[int, int] | None = None,
) -> BoundaryReport:
    check_caps(max_vertices, max_edges, caps)
    records: list[BoundaryStratumRecord] = []
    rejected: list[Rejection] = []
    seen: set[tuple] = set()
    single_zero = len(s.mu) == 1
    for g in enumerate_stable_graphs(s, max_vertices, max_edges, caps):
        if g.num_edges == 0:
            continue
        dominated = is_dominated(g)
        for t in enumerate_twisted_types(g, s):
            for lg in compatible_level_graphs(t):
                key = canonical_record_key(g, lg, t, s.symmetrize)
                if key in seen:
                    continue
                seen.add(key)
                if prune:
                    where = rational_bridge(g, t, s)
                    if where:
                        rejected.append(Rejection(g, lg, t, "residue-infeasible", f"{RATIONAL_BRIDGE} at {where}"))
                        continue
                    if single_zero and not unique_minimum_with_leg(lg):
                        rejected.append(Rejection(g, lg, t, "order-infeasible", NO_UNIQUE_MINIMUM))
                        continue
                sys = build_residue_system(lg, t, s)
                feas = grade(sys, t, feasible_residues(sys, seed), seed)
                if feas.verdict == INFEASIBLE:
                    rejected.append(Rejection(g, lg, t, "residue-infeasible", feas.certificate))
                    continue
                rec = BoundaryStratumRecord(g, lg, t, feas, sys)
                rec.grc_extra_rank = sys.grc_extra_rank()
                rec.extra_rank = sys.extra_rank()
                rec.dim = locus_dimension(rec)
                rec.pi2_fiber_dim = top_components(lg) - 1
                if dominated:
                    rec.tags.append("dominated")
                if rec.extra_rank > 0:
                    rec.tags.append("heuristic")
                records.append(rec)
    target = divisorial_target(s)
    for r in records:
        if r.dim == target and not r.dominated:
            r.tags.append("divisorial")
    records.sort(key=lambda r: -r.dim)
    return BoundaryReport(s, records, rejected, target)


# ----------------------------------------------------------------------
# binary curves made of two elliptic components


def binary_graph(g: int, mu: Sequence[int], sides: Sequence[int]) -> DualGraph:
    """Two genus-one vertices ``E1``, ``E2`` joined by ``g - 1`` edges; leg ``i`` sits on ``E{sides[i]}``."""
    return DualGraph.build(
        {"E1": 1, "E2": 1},
        [(f"q{j + 1}", "E1", "E2") for j in range(g - 1)],
        [(f"z{i}", f"E{side}", m) for i, (m, side) in enumerate(zip(mu, sides))],
    )


def binary_curve_membership(
    curves: tuple[EllipticCurveQ, EllipticCurveQ],
    mu: Sequence[int],
    marked: Sequence[tuple[int, Point]],
    nodes: Sequence[tuple[Point, Point]],
    seed: int = 0,
) -> list[tuple[LevelGraph, TwistedDiffType, Feasibility]]:
    """Feasible configurations on an explicit binary curve of two elliptic components.

    ``marked[i]`` is ``(side, point)`` for the i-th marked point and
    ``nodes[j]`` the node's points on ``E1`` and ``E2``.  On top of the
    residue conditions, the divisor of the differential on each component
    must be principal.
    """
    g = len(nodes) + 1
    s = StratumDescriptor(g, tuple(mu))
    graph = binary_graph(g, mu, [side for side, _ in marked])
    out = []
    for c in membership_candidates(graph, s, seed):
        if not c.feasibility.feasible:
            continue
        ok = True
        for side in (1, 2):
            E = curves[side - 1]
            entries = [(P, m) for (sd, P), m in zip(marked, mu) if sd == side]
            for j, pair in enumerate(nodes):
                entries.append((pair[side - 1], c.twisted_type[f"q{j + 1}:{side - 1}"]))
            D = DivisorE.of(entries)
            if D.degree != 0 or D.total(E) is not None:
                ok = False
        if ok:
            out.append((c.level_graph, c.twisted_type, c.feasibility))
    return out
