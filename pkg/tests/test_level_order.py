from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import ordered_bell, weak_orders_brute

from strataboundary.curve_graph import DualGraph, StratumDescriptor, enumerate_stable_graphs
from strataboundary.fixtures import load_fixture
from strataboundary.level_order import (
    LevelError,
    LevelGraph,
    connected_components_above,
    enumerate_level_structures,
    subgraph_above,
)


def path(n: int) -> DualGraph:
    verts = {f"v{i}": 1 for i in range(n)}
    return DualGraph.build(verts, [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(n - 1)], [])


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 13)])
def test_small_counts(n, count):
    assert len(enumerate_level_structures(path(n))) == count


def test_structures_are_the_weak_orders():
    g = path(4)
    got = {tuple(lg[v] for v in g.vertex_ids) for lg in enumerate_level_structures(g)}
    assert got == weak_orders_brute(4)
    assert len(got) == ordered_bell(4)


def test_levels_must_be_normalized():
    g = path(2)
    with pytest.raises(LevelError):
        LevelGraph.from_mapping(g, {"v0": 0, "v1": -2})
    with pytest.raises(LevelError):
        LevelGraph.from_mapping(g, {"v0": -1, "v1": -2})
    lg = LevelGraph.from_mapping(g, {"v0": 5, "v1": -3}, normalize=True)
    assert lg.levels == {"v0": 0, "v1": -1}


def test_view_above_bottom_of_grc_example():
    lg = load_fixture("example-3.1").level_graph()
    view = subgraph_above(lg, lg["X3"])
    assert set(view.vertices) == {"X1", "X2"}
    assert view.edges == ()


def test_nothing_above_top():
    lg = load_fixture("figure-9").level_graph()
    assert subgraph_above(lg, 0).vertices == ()
    assert connected_components_above(lg, 0) == []


def test_view_above_middle_of_six_vertex_example():
    fx = load_fixture("figure-2")
    lg = fx.level_graph("gamma2")
    view = subgraph_above(lg, lg["X4"])
    assert set(view.vertices) == {"X1", "X2", "X3"}
    assert view.edges == ()


def test_components_for_grc_example():
    lg = load_fixture("example-3.1").level_graph()
    comps = connected_components_above(lg, -1)
    assert sorted(sorted(c.vertices) for c in comps) == [["X1"], ["X2"]]
    for c in comps:
        assert len(c.edges_to_level) == 1
        assert not c.has_marked_pole


def test_components_at_bottom_of_second_level_graph():
    lg = load_fixture("figure-2").level_graph("gamma2")
    comps = connected_components_above(lg, lg.bottom_level())
    assert sorted(sorted(c.vertices) for c in comps) == [["X1", "X3", "X4"], ["X2"]]


def test_marked_pole_is_noticed():
    g = DualGraph.build({"T": 0, "B": 0}, [("a", "T", "B"), ("b", "T", "B")], [("p", "T", -4), ("z", "B", 4)])
    lg = LevelGraph.from_mapping(g, {"T": 0, "B": -1})
    (comp,) = connected_components_above(lg, -1)
    assert comp.has_marked_pole
    assert sorted(h for _, h in comp.edges_to_level) == ["a:1", "b:1"]


POOL = [g for g in enumerate_stable_graphs(StratumDescriptor(3, (4,)), 4, 4) if g.num_vertices >= 2]


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_views_partition_and_components_are_connected(data):
    g = data.draw(st.sampled_from(POOL))
    lg = data.draw(st.sampled_from(enumerate_level_structures(g)))
    for L in lg.level_values + [lg.bottom_level() - 1]:
        parts = [set(lg.above(L).vertices), set(lg.at_level(L).vertices), set(lg.below(L).vertices)]
        assert set().union(*parts) == set(g.vertex_ids)
        assert sum(len(p) for p in parts) == g.num_vertices
        assert set(lg.above_or_at(L).vertices) == parts[0] | parts[1]
        comps = connected_components_above(lg, L)
        seen: set[str] = set()
        view = lg.above(L)
        for c in comps:
            assert not (c.vertices & seen)
            seen |= c.vertices
            inner = [e for e in view.edges if e.ends[0] in c.vertices]
            assert len(g.components(c.vertices, inner)) == 1
            for _, h in c.edges_to_level:
                assert lg[g.half_edge(h).vertex] == L
        assert seen == parts[0]
