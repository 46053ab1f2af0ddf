from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strataboundary.curve_graph import DualGraph, StratumDescriptor, enumerate_stable_graphs
from strataboundary.fixtures import load_fixture
from strataboundary.level_order import LevelGraph
from strataboundary.p1_forms import build_p1_differential, residues, sample_residue_profiles
from strataboundary.residues import (
    FEASIBLE,
    INFEASIBLE,
    NECESSARY_ONLY,
    POSITIVE_GENUS_ASSUMPTION,
    ResidueError,
    build_residue_system,
    check_assignment,
    decide_membership,
    feasible_residues,
    feasible_with_scalings,
    membership_candidates,
)
from strataboundary.twisted_type import TwistedDiffType, compatible_level_graphs, enumerate_twisted_types


def system(name: str, levels: str = "default", orders: str = "default"):
    fx = load_fixture(name)
    lg, t = fx.level_graph(levels), fx.twisted_type(orders)
    return fx, lg, t, build_residue_system(lg, t, fx.stratum)


def grc_supports(sys) -> list[dict[str, Fraction]]:
    out = []
    for c in sys.linear_constraints:
        if c.kind == "grc":
            out.append({v: k for v, k in zip(sys.variables, c.coeffs) if k})
    return out


class TestBuild:
    def test_two_isolated_tops_force_each_residue(self):
        *_, sys = system("example-3.1")
        assert sorted(grc_supports(sys), key=str) == [{"q1:1": 1}, {"q2:1": 1}]
        assert [v for v, _ in sys.obstructed] == ["X3"]

    def test_middle_level_rows(self):
        *_, sys = system("example-3.4", "gamma1")
        rows = [r for r in grc_supports(sys) if all(sys.vertex_of(s) in ("X4", "X5") for s in r)]
        assert {"q14:1": 1, "q15:1": 1} in rows
        assert {"q25:1": 1} in rows
        assert {"q34:1": 1, "q35:1": 1} in rows

    def test_loop_rows(self):
        g = DualGraph.build({"X": 1}, [("q", "X", "X")], [("z", "X", 2)])
        t = TwistedDiffType.from_mapping(g, {"q:0": -1, "q:1": -1})
        sys = build_residue_system(LevelGraph.from_mapping(g, {"X": 0}), t, StratumDescriptor(2, (2,)))
        kinds = sorted(c.kind for c in sys.linear_constraints)
        assert kinds == ["pairing", "residue-theorem"]
        assert sorted(sys.nonzero_sites) == ["q:0", "q:1"]

    def test_mismatched_inputs_raise(self):
        fx = load_fixture("banana")
        flat = LevelGraph.from_mapping(fx.graph, {"X1": 0, "X2": 0})
        with pytest.raises(ResidueError):
            build_residue_system(flat, fx.twisted_type(), fx.stratum)
        other = load_fixture("figure-5")
        with pytest.raises(ResidueError):
            build_residue_system(other.level_graph(), fx.twisted_type(), fx.stratum)


class TestAssignments:
    def test_banana_opposite_residues(self):
        *_, sys = system("banana")
        assert check_assignment(sys, {"q1:1": 1, "q2:1": -1})

    def test_forced_zero_violated(self):
        *_, sys = system("example-3.1")
        assert not check_assignment(sys, {"q1:1": 1, "q2:1": -1})

    def test_zero_simple_pole(self):
        g = DualGraph.build({"X": 1}, [("q", "X", "X")], [("z", "X", 2)])
        t = TwistedDiffType.from_mapping(g, {"q:0": -1, "q:1": -1})
        sys = build_residue_system(LevelGraph.from_mapping(g, {"X": 0}), t)
        assert not check_assignment(sys, {"q:0": 0, "q:1": 0})
        assert check_assignment(sys, {"q:0": 3, "q:1": -3})

    def test_missing_site(self):
        *_, sys = system("banana")
        with pytest.raises(ResidueError):
            check_assignment(sys, {"q1:1": 1})


class TestFeasibility:
    def test_obstructed_rational_bottom(self):
        *_, sys = system("example-3.1")
        feas = feasible_residues(sys)
        assert feas.verdict == INFEASIBLE
        assert set(feas.forced_zero) == {"q1:1", "q2:1"}

    def test_two_elliptic_components(self):
        *_, sys = system("figure-5")
        feas = feasible_residues(sys)
        assert feas.verdict == FEASIBLE
        assert feas.witness == {"q:1": 0}

    def test_bridge(self):
        *_, sys = system("rational-bridge")
        assert feasible_residues(sys).verdict == INFEASIBLE

    def test_witness_satisfies_system(self):
        for name in ("banana", "figure-6", "figure-7a", "figure-7b"):
            *_, sys = system(name)
            feas = feasible_residues(sys, seed=5)
            assert feas.feasible and check_assignment(sys, feas.witness)


def nonlinear_base(r14, r24, r15, r25) -> dict[str, Fraction]:
    return {
        "q14:1": Fraction(r14), "q24:1": Fraction(r24), "q34:1": -Fraction(r14) - r24,
        "q15:1": Fraction(r15), "q25:1": Fraction(r25), "q35:1": -Fraction(r15) - r25,
    }


class TestScalings:
    def test_quadric_satisfied(self):
        fx, lg, t, _ = system("example-3.5")
        feas = feasible_with_scalings(lg, t, fx.stratum, nonlinear_base(1, 2, 2, 4))
        assert feas.verdict == FEASIBLE
        sys = build_residue_system(lg, t, fx.stratum)
        assert check_assignment(sys, feas.witness)
        assert all(x != 0 for x in feas.scalings.values())
        assert feas.scalings["X1"] == 1

    def test_quadric_violated(self):
        fx, lg, t, _ = system("example-3.5")
        assert feasible_with_scalings(lg, t, fx.stratum, nonlinear_base(1, 1, 1, 2)).verdict == INFEASIBLE

    def test_base_already_meeting_grc(self):
        fx, lg, t, _ = system("banana")
        feas = feasible_with_scalings(lg, t, fx.stratum, {"q1:1": 2, "q2:1": -2})
        assert feas.feasible

    def test_eliminated_polynomial(self):
        fx, lg, t, _ = system("example-3.5")
        feas = feasible_with_scalings(lg, t, fx.stratum, nonlinear_base(1, 2, 2, 4), eliminate=True)
        assert feas.polynomials == ("r_q14_1*r_q25_1 - r_q15_1*r_q24_1",)

    def test_bad_base_rejected(self):
        fx, lg, t, _ = system("example-3.5")
        bad = nonlinear_base(1, 2, 2, 4)
        bad["q34:1"] += 1
        with pytest.raises(ResidueError):
            feasible_with_scalings(lg, t, fx.stratum, bad)
        with pytest.raises(ResidueError):
            feasible_with_scalings(lg, t, fx.stratum, {"q14:1": 1})


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-6, 6), min_size=4, max_size=4),
    st.integers(1, 9).map(Fraction) | st.integers(-9, -1).map(Fraction),
    st.integers(1, 9).map(Fraction) | st.integers(-9, -1).map(Fraction),
)
def test_scaling_a_bottom_component_does_not_change_the_verdict(vals, l4, l5):
    fx, lg, t, _ = system("example-3.5")
    base = nonlinear_base(*vals)
    scaled = {k: v * (l4 if k.endswith("4:1") else l5) for k, v in base.items()}
    a = feasible_with_scalings(lg, t, fx.stratum, base).verdict
    b = feasible_with_scalings(lg, t, fx.stratum, scaled).verdict
    assert a == b


STRATA = [StratumDescriptor(2, (2,)), StratumDescriptor(3, (4,)), StratumDescriptor(2, (1, 1)), StratumDescriptor(1, (3, -3))]
CONFIGS = [
    (lg, t, s)
    for s in STRATA
    for g in enumerate_stable_graphs(s, 3, 3)
    for t in enumerate_twisted_types(g, s)
    for lg in compatible_level_graphs(t)
]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CONFIGS))
def test_redundant_grc_changes_nothing(cfg):
    lg, t, s = cfg
    sys = build_residue_system(lg, t, s)
    loose = feasible_residues(sys.without("grc"))
    if sys.grc_extra_rank() == 0:
        assert feasible_residues(sys).feasible == loose.feasible
    if feasible_residues(sys).feasible:
        assert loose.feasible


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CONFIGS))
def test_obstruction_flags_match_the_rule(cfg):
    lg, t, s = cfg
    sys = build_residue_system(lg, t, s)
    flagged = {v for v, _ in sys.obstructed}
    for v, gv in t.graph.vertices:
        sig = [o for _, o in t.sites_at(v)]
        rule = gv == 0 and sum(1 for o in sig if o > 0) == 1 and sum(1 for o in sig if o <= -1) >= 2
        assert (v in flagged) == rule
        if rule:
            assert sample_residue_profiles(sig, 20, seed=len(sig)).all_zero == 0


def test_two_zeros_allow_vanishing_residues():
    # the derivative of 1/(z(z-1)) has zeros at 1/2 and infinity and no residues
    w = build_p1_differential([["1/2", 1], [0, -2], [1, -2]], scale=-2)
    assert w.order_at("inf") == 1
    assert set(residues(w).values()) == {0}


class TestMembership:
    def test_banana(self):
        fx = load_fixture("banana")
        (conf,) = decide_membership(fx.graph, fx.stratum)
        assert conf[2].verdict == FEASIBLE
        assert conf[2].assumptions == ()

    def test_pole_on_elliptic_component_is_assumed_realizable(self):
        fx = load_fixture("figure-5")
        (conf,) = decide_membership(fx.graph, fx.stratum)
        assert POSITIVE_GENUS_ASSUMPTION in conf[2].assumptions

    def test_bridge(self):
        fx = load_fixture("rational-bridge")
        assert decide_membership(fx.graph, fx.stratum) == []
        cands = membership_candidates(fx.graph, fx.stratum)
        assert len(cands) == 3
        assert {c.feasibility.verdict for c in cands} == {INFEASIBLE}

    def test_smooth(self):
        g = DualGraph.build({"X": 3}, [], [("z", "X", 4)])
        (conf,) = decide_membership(g, StratumDescriptor(3, (4,)))
        assert conf[2].verdict == FEASIBLE

    def test_rational_with_many_poles_is_only_necessary(self):
        fx = load_fixture("figure-6")
        verdicts = {c[2].verdict for c in decide_membership(fx.graph, fx.stratum)}
        assert verdicts == {NECESSARY_ONLY}


def test_witness_reproducible():
    *_, sys = system("figure-6")
    assert feasible_residues(sys, seed=3).witness == feasible_residues(sys, seed=3).witness
