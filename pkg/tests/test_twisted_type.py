from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strataboundary.curve_graph import DualGraph, StratumDescriptor, enumerate_stable_graphs
from strataboundary.fixtures import load_fixture
from strataboundary.level_order import LevelGraph, enumerate_level_structures
from strataboundary.twisted_type import (
    TwistedDiffType,
    check_condition3,
    check_type,
    compatible_level_graphs,
    enumerate_twisted_types,
    induced_partial_order,
    local_minima,
    minimum_has_zero_or_point,
    unique_minimum_with_leg,
)

G2 = StratumDescriptor(2, (2,))


def test_two_elliptic_type_passes():
    fx = load_fixture("figure-5")
    assert check_type(fx.twisted_type(), fx.stratum).ok


def test_mismatched_edge_orders_fail():
    g = DualGraph.build({"A": 1, "B": 1}, [("q", "A", "B")], [("z", "B", 2)])
    report = check_type(TwistedDiffType.from_mapping(g, {"q:0": 0, "q:1": -1}), G2)
    assert not report.ok
    assert any("q" in v for v in report.violations)


def test_wrong_degree_fails():
    g = DualGraph.build({"A": 1, "B": 1}, [("q", "A", "B")], [("z", "B", 2)])
    assert not check_type(TwistedDiffType.from_mapping(g, {"q:0": 1, "q:1": -3}), G2).ok


def test_top_of_three_level_chain_has_one_zero_at_node():
    fx = load_fixture("example-3.2")
    for key in fx.orders:
        t = fx.twisted_type(key)
        assert check_type(t, fx.stratum).ok
        assert t.signature("X1") == (0,)


def test_banana_level_condition():
    fx = load_fixture("banana")
    t = fx.twisted_type()
    assert check_condition3(fx.level_graph(), t)
    flat = LevelGraph.from_mapping(fx.graph, {"X1": 0, "X2": 0})
    assert not check_condition3(flat, t)


def test_orders_pick_out_different_level_graphs():
    fx = load_fixture("example-3.3")
    right, middle = fx.level_graph("right"), fx.level_graph("middle")
    assert check_condition3(right, fx.twisted_type("k2"))
    assert not check_condition3(middle, fx.twisted_type("k2"))
    assert check_condition3(middle, fx.twisted_type("k0"))
    assert not check_condition3(right, fx.twisted_type("k0"))


@pytest.mark.parametrize("name,count", [("banana", 1), ("figure-5", 1), ("rational-bridge", 1)])
def test_unique_types(name, count):
    fx = load_fixture(name)
    types = enumerate_twisted_types(fx.graph, fx.stratum)
    assert len(types) == count
    assert types[0].orders == fx.twisted_type().orders


def test_bridge_type_has_double_poles_at_both_nodes():
    fx = load_fixture("rational-bridge")
    (t,) = enumerate_twisted_types(fx.graph, fx.stratum)
    assert sorted(t.signature("X3")) == [-2, -2, 2]


def test_banana_has_one_compatible_level_graph():
    fx = load_fixture("banana")
    rel, lgs = induced_partial_order(fx.twisted_type())
    assert rel.ties == ()
    assert len(lgs) == 1 and lgs[0].levels == {"X1": 0, "X2": -1}


def test_single_vertex_has_trivial_level_graph():
    g = DualGraph.build({"X": 1}, [("q", "X", "X")], [("z", "X", 2)])
    t = TwistedDiffType.from_mapping(g, {"q:0": -1, "q:1": -1})
    (lg,) = compatible_level_graphs(t)
    assert lg.levels == {"X": 0}


def test_example_types_give_two_distinct_level_graphs():
    fx = load_fixture("example-3.3")
    hi = [lg.levels for lg in compatible_level_graphs(fx.twisted_type("k2"))]
    lo = [lg.levels for lg in compatible_level_graphs(fx.twisted_type("k0"))]
    assert fx.levels["right"] in hi and fx.levels["middle"] in lo
    assert fx.levels["right"] not in lo


STRATA = [G2, StratumDescriptor(3, (4,)), StratumDescriptor(2, (1, 1)), StratumDescriptor(1, (2, -2))]
PAIRS = [(g, s) for s in STRATA for g in enumerate_stable_graphs(s, 4, 4) if g.num_edges and g.num_vertices <= 4]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(PAIRS))
def test_enumerated_types_are_valid(pair):
    g, s = pair
    for t in enumerate_twisted_types(g, s):
        assert check_type(t, s).ok
        for e in g.edges:
            h0, h1 = e.half_edges
            assert t[h0] + t[h1] == -2
        for v, gv in g.vertices:
            assert sum(t.signature(v)) == 2 * gv - 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PAIRS))
def test_compatible_level_graphs_complete(pair):
    g, s = pair
    every = enumerate_level_structures(g)
    for t in enumerate_twisted_types(g, s):
        got = {tuple(sorted(lg.levels.items())) for lg in compatible_level_graphs(t)}
        want = {tuple(sorted(lg.levels.items())) for lg in every if check_condition3(lg, t)}
        assert got == want
        assert got


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PAIRS))
def test_local_minima_carry_a_zero_or_point(pair):
    g, s = pair
    if s.genus == 1 and s.n == 0:
        return
    for t in enumerate_twisted_types(g, s):
        for lg in compatible_level_graphs(t):
            for v in local_minima(lg):
                assert minimum_has_zero_or_point(lg, t, v)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([p for p in PAIRS if p[1].n == 1 and p[1].mu[0] > 0]))
def test_single_zero_has_unique_minimum_at_the_leg(pair):
    g, s = pair
    for t in enumerate_twisted_types(g, s):
        for lg in compatible_level_graphs(t):
            assert unique_minimum_with_leg(lg)
