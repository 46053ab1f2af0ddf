from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from strataboundary.p1_forms import (
    INF,
    P1Error,
    build_p1_differential,
    realizes_two_pole_residue,
    residue_at,
    residues,
    sample_residue_profiles,
)

z = sympy.Symbol("z")


def sympy_residue(w, p) -> Fraction:
    f = sympy.Rational(w.scale.numerator, w.scale.denominator)
    for q, m in w.finite:
        f *= (z - sympy.Rational(q.numerator, q.denominator)) ** m
    if p == INF:
        r = -sympy.residue(sympy.together(f.subs(z, 1 / z) / z**2), z, 0)
    else:
        r = sympy.residue(f, z, sympy.Rational(p.numerator, p.denominator))
    r = sympy.nsimplify(r)
    return Fraction(int(r.p), int(r.q))


class TestBuild:
    def test_three_double_poles(self):
        w = build_p1_differential([[0, -2], [1, -2], [2, -2]])
        assert w.order_at_infinity == 4
        assert w.divisor() == {Fraction(0): -2, Fraction(1): -2, Fraction(2): -2, INF: 4}

    def test_standard_simple_pole(self):
        w = build_p1_differential([[0, -1], ["inf", -1]])
        assert residue_at(w, 0) == 1
        assert residue_at(w, "inf") == -1

    def test_zero_order_at_infinity_is_omitted(self):
        w = build_p1_differential([[0, 2], [1, -2], [2, -2]])
        assert w.order_at_infinity == 0
        assert INF not in w.divisor()

    def test_errors(self):
        with pytest.raises(P1Error):
            build_p1_differential([[0, -1], [0, -1]])
        with pytest.raises(P1Error):
            build_p1_differential([[0, -1], ["inf", -2]])
        with pytest.raises(P1Error):
            build_p1_differential([[0.5, -2]])


class TestResidues:
    def test_family_at_two(self):
        w = build_p1_differential([[0, -2], [1, -2], [2, -2]])
        assert residue_at(w, 0) == Fraction(3, 4)

    def test_family_vanishes_at_minus_one(self):
        w = build_p1_differential([[0, -2], [1, -2], [-1, -2]])
        assert residue_at(w, 0) == 0

    def test_holomorphic_point(self):
        w = build_p1_differential([[0, 2], [1, -2], [2, -2]])
        assert residue_at(w, 0) == 0
        assert residue_at(w, 7) == 0


def differentials():
    point = st.fractions(min_value=-20, max_value=20, max_denominator=12)
    order = st.integers(-4, 3)

    @st.composite
    def build(draw):
        pts = draw(st.lists(point, min_size=1, max_size=4, unique=True))
        ords = [draw(order) for _ in pts]
        scale = draw(st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool))
        return build_p1_differential(list(zip(pts, ords)), scale)

    return build()


@settings(max_examples=60, deadline=None)
@given(differentials())
def test_residues_agree_with_sympy(w):
    for p in w.poles():
        assert residue_at(w, p) == sympy_residue(w, p)


@settings(max_examples=200, deadline=None)
@given(differentials())
def test_residues_sum_to_zero(w):
    assert sum(residues(w).values(), Fraction(0)) == 0


@settings(max_examples=200, deadline=None)
@given(differentials())
def test_simple_poles_have_nonzero_residue(w):
    for p, m in w.divisor().items():
        if m == -1:
            assert residue_at(w, p) != 0


@settings(max_examples=100, deadline=None)
@given(differentials())
def test_divisor_read_back(w):
    again = build_p1_differential([[p, m] for p, m in w.divisor().items()], w.scale)
    assert again.divisor() == w.divisor()
    assert sum(w.divisor().values()) == -2


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=-50, max_value=50, max_denominator=30).filter(lambda a: a not in (0, 1)))
def test_family_formula(a):
    w = build_p1_differential([[0, -2], [1, -2], [a, -2]])
    assert residue_at(w, 0) == 2 * (a + 1) / a**3


class TestSampling:
    def test_single_zero_double_poles(self):
        stats = sample_residue_profiles((2, -2, -2), 100, seed=1)
        assert stats.all_zero == 0

    def test_simple_poles_never_vanish(self):
        stats = sample_residue_profiles((0, 0, -1, -1), 50, seed=2)
        assert stats.all_zero == 0 and stats.some_zero == 0

    def test_two_zeros_is_observational(self):
        stats = sample_residue_profiles((1, 1, -2, -2), 100, seed=3)
        assert stats.trials == 100
        assert 0 <= stats.all_zero + stats.some_zero <= 100

    def test_reproducible(self):
        a = sample_residue_profiles((3, -1, -2, -2), 30, seed=9)
        b = sample_residue_profiles((3, -1, -2, -2), 30, seed=9)
        assert (a.all_zero, a.some_zero) == (b.all_zero, b.some_zero)

    def test_degree_checked(self):
        with pytest.raises(P1Error):
            sample_residue_profiles((2, -2), 5)


def test_two_pole_realization():
    assert realizes_two_pole_residue((2, -2, -2))
    assert not realizes_two_pole_residue((3, -2, -2, -1))
