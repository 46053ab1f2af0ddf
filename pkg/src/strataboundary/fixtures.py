"""Bundled configurations: small level graphs and types used throughout the tests.

Each fixture is a graph together with named level functions and named
twisted types.  Lower branches of the edges in the two-level examples are
the ``":1"`` half-edges, so the residue written ``r_ij`` is the site
``"qij:1"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .curve_graph import DualGraph, StratumDescriptor
from .level_order import LevelGraph
from .serialize import graph_to_json
from .twisted_type import TwistedDiffType


class UnknownFixture(KeyError):
    pass


@dataclass
class Fixture:
    name: str
    description: str
    graph: DualGraph
    stratum: StratumDescriptor
    levels: dict[str, dict[str, int]] = field(default_factory=dict)
    orders: dict[str, dict[str, int]] = field(default_factory=dict)

    def level_graph(self, key: str = "default") -> LevelGraph:
        return LevelGraph.from_mapping(self.graph, self.levels[key])

    def twisted_type(self, key: str = "default") -> TwistedDiffType:
        return TwistedDiffType.from_mapping(self.graph, self.orders[key])

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "graph": graph_to_json(self.graph, self.stratum),
            "levels": {k: {"levels": v} for k, v in self.levels.items()},
            "orders": {k: {"half_edge_orders": v} for k, v in self.orders.items()},
        }


def _two_level(upper_ends: list[tuple], upper: int = 0) -> dict[str, int]:
    """Orders ``upper`` on the first end of each edge and ``-2 - upper`` on the second."""
    out = {}
    for eid, *_ in upper_ends:
        out[f"{eid}:0"] = upper
        out[f"{eid}:1"] = -2 - upper
    return out


def _loop_elliptic() -> Fixture:
    g = DualGraph.build({"X": 1}, [("q", "X", "X")], [("z", "X", 2)])
    return Fixture("figure-4", "genus-one component with a non-separating node; locus (I)", g,
                   StratumDescriptor(2, (2,)), {"default": {"X": 0}}, {"default": {"q:0": -1, "q:1": -1}})


def _two_elliptic() -> Fixture:
    g = DualGraph.build({"X1": 1, "X2": 1}, [("q", "X1", "X2")], [("z", "X2", 2)])
    return Fixture("figure-5", "two elliptic components meeting once, the marked point below; locus (II)", g,
                   StratumDescriptor(2, (2,)), {"default": {"X1": 0, "X2": -1}}, {"default": {"q:0": 0, "q:1": -2}})


def _two_nodal() -> Fixture:
    g = DualGraph.build({"X": 0}, [("q1", "X", "X"), ("q2", "X", "X")], [("z", "X", 2)])
    orders = {"q1:0": -1, "q1:1": -1, "q2:0": -1, "q2:1": -1}
    return Fixture("figure-6", "irreducible rational curve with two nodes", g, StratumDescriptor(2, (2,)),
                   {"default": {"X": 0}}, {"default": orders})


def _elliptic_rational_nodal(leg_on: str, name: str) -> Fixture:
    g = DualGraph.build({"X1": 1, "X2": 0}, [("q", "X1", "X2"), ("p", "X2", "X2")], [("z", leg_on, 2)])
    if leg_on == "X1":
        levels, orders = {"X1": -1, "X2": 0}, {"q:0": -2, "q:1": 0, "p:0": -1, "p:1": -1}
    else:
        levels, orders = {"X1": 0, "X2": -1}, {"q:0": 0, "q:1": -2, "p:0": -1, "p:1": -1}
    where = "elliptic" if leg_on == "X1" else "rational nodal"
    return Fixture(name, f"elliptic curve union a rational nodal curve, marked point on the {where} component", g,
                   StratumDescriptor(2, (2,)), {"default": levels}, {"default": orders})


def _bridge() -> Fixture:
    g = DualGraph.build({"X1": 1, "X2": 1, "X3": 0}, [("q1", "X1", "X3"), ("q2", "X2", "X3")], [("z", "X3", 2)])
    return Fixture("figure-8", "two elliptic curves joined by a pointed rational bridge", g, StratumDescriptor(2, (2,)),
                   {"default": {"X1": 0, "X2": 0, "X3": -1}},
                   {"default": _two_level([("q1", ""), ("q2", "")])})


def _banana() -> Fixture:
    g = DualGraph.build({"X1": 1, "X2": 0}, [("q1", "X1", "X2"), ("q2", "X1", "X2")], [("z", "X2", 2)])
    return Fixture("figure-9", "elliptic and rational curves meeting at two nodes; locus (III)", g,
                   StratumDescriptor(2, (2,)), {"default": {"X1": 0, "X2": -1}},
                   {"default": _two_level([("q1", ""), ("q2", "")])})


def _prop21_left() -> Fixture:
    g = DualGraph.build({"X1": 1, "Xg": 2}, [("q", "Xg", "X1")], [("z1", "X1", 2), ("z2", "X1", 2)])
    return Fixture("figure-1-left", "genus g-1 component above an elliptic one carrying all marked points (g=3)", g,
                   StratumDescriptor(3, (2, 2)), {"default": {"Xg": 0, "X1": -1}}, {"default": {"q:0": 2, "q:1": -4}})


def _prop21_right() -> Fixture:
    g = DualGraph.build(
        {"X1": 1, "Xg": 2, "X2": 1},
        [("q1", "X1", "X2"), ("q2", "Xg", "X2")],
        [("z1", "X2", 3), ("z2", "X2", 3)],
    )
    return Fixture("figure-1", "two top components over an elliptic one carrying all marked points (g=4)", g,
                   StratumDescriptor(4, (3, 3)), {"default": {"X1": 0, "Xg": 0, "X2": -1}},
                   {"default": {"q1:0": 0, "q1:1": -2, "q2:0": 2, "q2:1": -4}})


def _grc_needed() -> Fixture:
    g = DualGraph.build({"X1": 1, "X2": 2, "X3": 0}, [("q1", "X1", "X3"), ("q2", "X2", "X3")], [("z", "X3", 4)])
    return Fixture("figure-3", "two top components over a rational one with a unique zero (g=3)", g,
                   StratumDescriptor(3, (4,)), {"default": {"X1": 0, "X2": 0, "X3": -1}},
                   {"default": {"q1:0": 0, "q1:1": -2, "q2:0": 2, "q2:1": -4}})


def _not_unique() -> Fixture:
    g = DualGraph.build(
        {"X1": 1, "X2": 1, "X3": 1},
        [("q1", "X1", "X2"), ("q2", "X2", "X3"), ("q3", "X2", "X3")],
        [("z", "X3", 6)],
    )
    orders = {}
    for k in (2, 3, 4):
        orders[f"k{k}"] = {"q1:0": 0, "q1:1": -2, "q2:0": k - 2, "q2:1": -k, "q3:0": 4 - k, "q3:1": k - 6}
    return Fixture("example-3.2", "three-level chain whose lower types depend on a parameter k (g=4)", g,
                   StratumDescriptor(4, (6,)), {"default": {"X1": 0, "X2": -1, "X3": -2}}, orders)


def _no_partial_order() -> Fixture:
    g = DualGraph.build(
        {"X1": 1, "X2": 1, "X3": 0, "X4": 0},
        [("q1", "X1", "X2"), ("q2", "X2", "X3"), ("q3", "X2", "X4"), ("q4", "X3", "X4")],
        [("z1", "X3", 2), ("z2", "X4", 2)],
    )
    orders = {}
    for k in (0, 1, 2):
        orders[f"k{k}"] = {
            "q1:0": 0, "q1:1": -2,
            "q2:0": k, "q2:1": -k - 2,
            "q3:0": 2 - k, "q3:1": k - 4,
            "q4:0": k - 2, "q4:1": -k,
        }
    levels = {
        "right": {"X1": 0, "X2": -1, "X3": -2, "X4": -3},
        "middle": {"X1": 0, "X2": -1, "X4": -2, "X3": -3},
    }
    return Fixture("figure-10", "triangle below a top component; the order of the two lowest components varies with k", g,
                   StratumDescriptor(3, (2, 2)), levels, orders)


def _different_grc() -> Fixture:
    edges = [("q14", "X1", "X4"), ("q15", "X1", "X5"), ("q25", "X2", "X5"), ("q26", "X2", "X6"),
             ("q46", "X4", "X6"), ("q34", "X3", "X4"), ("q35", "X3", "X5")]
    g = DualGraph.build(
        {"X1": 1, "X2": 1, "X3": 1, "X4": 0, "X5": 0, "X6": 0},
        edges,
        [("z1", "X4", 2), ("z2", "X5", 4), ("z3", "X6", 2)],
    )
    levels = {
        "gamma1": {"X1": 0, "X2": 0, "X3": 0, "X4": -1, "X5": -1, "X6": -2},
        "gamma2": {"X1": 0, "X2": 0, "X3": 0, "X4": -1, "X5": -2, "X6": -2},
    }
    return Fixture("figure-2", "one graph with two level graphs imposing different residue conditions", g,
                   StratumDescriptor(5, (2, 4, 2)), levels, {"default": _two_level(edges)})


def _nonlinear() -> Fixture:
    edges = [(f"q{i}{j}", f"X{i}", f"X{j}") for i in (1, 2, 3) for j in (4, 5)]
    g = DualGraph.build(
        {"X1": 1, "X2": 1, "X3": 1, "X4": 0, "X5": 0},
        edges,
        [("z1", "X4", 4), ("z2", "X5", 4)],
    )
    return Fixture("figure-11", "three top components each meeting both bottom components; scalings needed", g,
                   StratumDescriptor(5, (4, 4)), {"default": {"X1": 0, "X2": 0, "X3": 0, "X4": -1, "X5": -1}},
                   {"default": _two_level(edges)})


_BUILDERS: dict[str, Callable[[], Fixture]] = {
    "figure-1": _prop21_right,
    "figure-1-left": _prop21_left,
    "figure-2": _different_grc,
    "figure-3": _grc_needed,
    "figure-4": _loop_elliptic,
    "figure-5": _two_elliptic,
    "figure-6": _two_nodal,
    "figure-7a": lambda: _elliptic_rational_nodal("X1", "figure-7a"),
    "figure-7b": lambda: _elliptic_rational_nodal("X2", "figure-7b"),
    "figure-8": _bridge,
    "figure-9": _banana,
    "figure-10": _no_partial_order,
    "figure-11": _nonlinear,
    "example-3.2": _not_unique,
}

ALIASES = {
    "example-3.1": "figure-3",
    "example-3.3": "figure-10",
    "example-3.4": "figure-2",
    "example-3.5": "figure-11",
    "banana": "figure-9",
    "rational-bridge": "figure-8",
}


def fixture_names() -> list[str]:
    return sorted(set(_BUILDERS) | set(ALIASES))


def load_fixture(name: str) -> Fixture:
    key = ALIASES.get(name, name)
    if key not in _BUILDERS:
        raise UnknownFixture(name)
    fx = _BUILDERS[key]()
    fx.name = name
    return fx
