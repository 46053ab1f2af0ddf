"""Residue constraints of twisted differentials as exact linear systems.

Every polar site (leg or half-edge of order at most -1) gets one rational
unknown.  The rows are

* ``pairing``: residues at the two branches of a ``(-1, -1)`` node cancel,
* ``residue-theorem``: the residues on each component sum to zero,
* ``grc``: for each level ``L`` and each connected component above ``L``
  without a marked pole, the residues at the lower branches of its nodes
  meeting level ``L`` sum to zero.

Sites of order exactly -1 must have nonzero residue, and a rational
component with a single zero and several poles cannot have all of its
residues vanish.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .curve_graph import DualGraph, StratumDescriptor
from .level_order import LevelGraph, connected_components_above
from .twisted_type import TwistedDiffType, check_condition3, check_type, compatible_level_graphs, enumerate_twisted_types

FEASIBLE = "feasible"
NECESSARY_ONLY = "necessary-conditions feasible"
INFEASIBLE = "infeasible"
UNDECIDED = "undecided"

POSITIVE_GENUS_ASSUMPTION = "positive-genus residue realizability assumed"
RATIONAL_ASSUMPTION = "rational-component residues checked by necessary conditions only"


class ResidueError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    kind: str
    label: str
    coeffs: tuple[Fraction, ...]

    def support(self, variables: Sequence[str]) -> list[str]:
        return [v for v, c in zip(variables, self.coeffs) if c != 0]


@dataclass(frozen=True)
class ResidueSystem:
    variables: tuple[str, ...]
    site_vertex: tuple[tuple[str, str], ...]
    site_order: tuple[tuple[str, int], ...]
    constraints: tuple[Constraint, ...]
    nonzero_sites: tuple[str, ...]
    obstructed: tuple[tuple[str, tuple[str, ...]], ...]

    @property
    def linear_constraints(self) -> list[Constraint]:
        return list(self.constraints)

    def rows(self, *kinds: str) -> list[tuple[Fraction, ...]]:
        return [c.coeffs for c in self.constraints if not kinds or c.kind in kinds]

    def index(self, site: str) -> int:
        return self.variables.index(site)

    def vertex_of(self, site: str) -> str:
        return dict(self.site_vertex)[site]

    def without(self, kind: str) -> ResidueSystem:
        return ResidueSystem(
            self.variables,
            self.site_vertex,
            self.site_order,
            tuple(c for c in self.constraints if c.kind != kind),
            self.nonzero_sites,
            self.obstructed,
        )

    def rank(self, *kinds: str) -> int:
        return linalg.rank(self.rows(*kinds), len(self.variables))

    def grc_extra_rank(self) -> int:
        """Rank of the GRC rows modulo the residue-theorem and pairing rows."""
        return self.rank() - self.rank("residue-theorem", "pairing")

    def extra_rank(self) -> int:
        """Rank of all rows beyond what the residue theorem alone imposes."""
        return self.rank() - self.rank("residue-theorem")


@dataclass(frozen=True)
class Feasibility:
    verdict: str
    witness: dict[str, Fraction] | None = None
    certificate: str = ""
    forced_zero: tuple[str, ...] = ()
    polynomials: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()
    scalings: dict[str, Fraction] | None = None

    @property
    def feasible(self) -> bool:
        return self.verdict in (FEASIBLE, NECESSARY_ONLY)


def polar_sites(t: TwistedDiffType) -> list[tuple[str, str, int]]:
    """``(site, vertex, order)`` for every site of order at most -1, vertex by vertex."""
    out = []
    for v in t.graph.vertex_ids:
        out.extend((site, v, o) for site, o in t.sites_at(v) if o <= -1)
    return out


def build_residue_system(lg: LevelGraph, t: TwistedDiffType, s: StratumDescriptor | None = None) -> ResidueSystem:
    g = t.graph
    if lg.graph is not g and lg.graph != g:
        raise ResidueError("level graph and type live on different graphs")
    if s is not None and not check_type(t, s):
        raise ResidueError("; ".join(check_type(t, s).violations))
    if not check_condition3(lg, t):
        raise ResidueError("type is not compatible with the level graph")
    sites = polar_sites(t)
    names = tuple(x[0] for x in sites)
    idx = {n: i for i, n in enumerate(names)}

    def row(kind: str, label: str, terms: Mapping[str, int]) -> Constraint:
        vec = [Fraction(0)] * len(names)
        for site, c in terms.items():
            vec[idx[site]] += c
        return Constraint(kind, label, tuple(vec))

    rows: list[Constraint] = []
    for e in g.edges:
        h0, h1 = e.half_edges
        if t[h0] == -1 and t[h1] == -1:
            rows.append(row("pairing", f"edge {e.id}", {h0: 1, h1: 1}))
    for v in g.vertex_ids:
        at_v = {site: 1 for site, w, _ in sites if w == v}
        if at_v:
            rows.append(row("residue-theorem", f"vertex {v}", at_v))
    for L in lg.level_values[1:]:
        for comp in connected_components_above(lg, L):
            if comp.has_marked_pole or not comp.edges_to_level:
                continue
            terms: dict[str, int] = {}
            for _, h in comp.edges_to_level:
                terms[h] = terms.get(h, 0) + 1
            label = f"level {L} component {{{','.join(sorted(comp.vertices))}}}"
            rows.append(row("grc", label, terms))

    nonzero = tuple(site for site, _, o in sites if o == -1)
    obstructed = []
    for v, gv in g.vertices:
        if gv != 0:
            continue
        sig = t.sites_at(v)
        poles = tuple(site for site, o in sig if o <= -1)
        if sum(1 for _, o in sig if o > 0) == 1 and len(poles) >= 2:
            obstructed.append((v, poles))
    return ResidueSystem(
        variables=names,
        site_vertex=tuple((x[0], x[1]) for x in sites),
        site_order=tuple((x[0], x[2]) for x in sites),
        constraints=tuple(rows),
        nonzero_sites=nonzero,
        obstructed=tuple(obstructed),
    )


def check_assignment(sys: ResidueSystem, a: Mapping[str, object]) -> bool:
    missing = [v for v in sys.variables if v not in a]
    if missing:
        raise ResidueError(f"assignment misses sites {missing}")
    vals = [Fraction(a[v]) for v in sys.variables]
    for c in sys.constraints:
        if sum(x * y for x, y in zip(c.coeffs, vals)) != 0:
            return False
    if any(Fraction(a[s]) == 0 for s in sys.nonzero_sites):
        return False
    for _, poles in sys.obstructed:
        if all(Fraction(a[p]) == 0 for p in poles):
            return False
    return True


def feasible_residues(sys: ResidueSystem, seed: int = 0) -> Feasibility:
    """Decide whether the system has a solution meeting the nonzero conditions.

    The solution set is the kernel ``K`` of the rows.  Each nonzero
    requirement excludes a proper subspace of ``K`` unless it already holds
    identically, and a vector space over an infinite field is not a finite
    union of proper subspaces, so it suffices to test each requirement
    separately.  A witness is then found by random rational combinations.
    """
    n = len(sys.variables)
    basis = linalg.nullspace(sys.rows(), n)
    forced = tuple(v for i, v in enumerate(sys.variables) if all(b[i] == 0 for b in basis))
    bad_sites = [s for s in sys.nonzero_sites if s in forced]
    if bad_sites:
        return Feasibility(INFEASIBLE, certificate=f"simple-pole residues forced to zero at {', '.join(bad_sites)}", forced_zero=forced)
    for v, poles in sys.obstructed:
        if all(p in forced for p in poles):
            return Feasibility(
                INFEASIBLE,
                certificate=f"all residues on rational component {v} with a unique zero are forced to zero",
                forced_zero=forced,
            )
    rng = random.Random(seed)
    bound = 3
    while True:
        for _ in range(20):
            coeffs = [Fraction(rng.randint(-bound, bound)) for _ in basis]
            w = [sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0)) for i in range(n)]
            witness = dict(zip(sys.variables, w))
            if check_assignment(sys, witness):
                return Feasibility(FEASIBLE, witness=witness, certificate="kernel point meeting all nonzero conditions", forced_zero=forced)
        bound *= 4


# ----------------------------------------------------------------------
# rescaling lower levels


def _level_rows(sys: ResidueSystem, lg: LevelGraph, L: int) -> tuple[list[str], list[Constraint]]:
    where = dict(sys.site_vertex)
    verts = [v for v in lg.graph.vertex_ids if lg[v] == L]
    rows = []
    for c in sys.constraints:
        if c.kind not in ("grc", "pairing"):
            continue
        sup = c.support(sys.variables)
        if sup and lg[where[sup[0]]] == L:
            rows.append(c)
    return verts, rows


def feasible_with_scalings(
    lg: LevelGraph,
    t: TwistedDiffType,
    s: StratumDescriptor | None,
    base: Mapping[str, object],
    eliminate: bool = False,
) -> Feasibility:
    """Whether nonzero rescalings of the non-top components make ``base`` satisfy GRC.

    The top level stays unscaled.  Rows at different levels involve
    disjoint sets of scalings, so each level is an independent homogeneous
    linear system in its scalings; it is solvable with all scalings
    nonzero iff no scaling is identically zero on its kernel.
    """
    sys = build_residue_system(lg, t, s)
    vals = {v: Fraction(base[v]) for v in sys.variables if v in base}
    if len(vals) != len(sys.variables):
        raise ResidueError("base residues must cover every polar site")
    for c in sys.constraints:
        if c.kind == "residue-theorem" and sum(k * vals[v] for k, v in zip(c.coeffs, sys.variables)) != 0:
            raise ResidueError(f"base violates the residue theorem at {c.label}")
    top = set(lg.top_vertices())
    for c in sys.constraints:
        if c.kind == "pairing":
            sup = c.support(sys.variables)
            if sup and sys.vertex_of(sup[0]) in top and sum(vals[v] for v in sup) != 0:
                raise ResidueError(f"base violates residue matching at top-level {c.label}")
    if any(vals[v] == 0 for v in sys.nonzero_sites):
        raise ResidueError("base has a zero residue at a simple pole")

    where = dict(sys.site_vertex)
    scalings: dict[str, Fraction] = {v: Fraction(1) for v in top}
    polys: list[str] = []
    verdict, cert = FEASIBLE, "every level admits nonzero scalings"
    for L in lg.level_values[1:]:
        verts, rows = _level_rows(sys, lg, L)
        col = {v: i for i, v in enumerate(verts)}
        mat = []
        for c in rows:
            r = [Fraction(0)] * len(verts)
            for k, site in zip(c.coeffs, sys.variables):
                if k:
                    r[col[where[site]]] += k * vals[site]
            mat.append(r)
        basis = linalg.nullspace(mat, len(verts))
        dead = [v for i, v in enumerate(verts) if all(b[i] == 0 for b in basis)]
        if eliminate:
            polys.extend(eliminated_conditions(sys, lg, L))
        if dead:
            verdict = INFEASIBLE
            cert = f"level {L}: scalings of {', '.join(dead)} forced to zero"
            continue
        rng = random.Random(L)
        while True:
            coeffs = [Fraction(rng.randint(-5, 5)) for _ in basis]
            lam = [sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0)) for i in range(len(verts))]
            if all(x != 0 for x in lam):
                break
        scalings.update(zip(verts, lam))
    if verdict == INFEASIBLE:
        return Feasibility(INFEASIBLE, certificate=cert, polynomials=tuple(polys))
    scaled = {site: scalings[where[site]] * vals[site] for site in sys.variables}
    return Feasibility(FEASIBLE, witness=scaled, certificate=cert, polynomials=tuple(polys), scalings=scalings)


def residue_symbol(site: str) -> str:
    """Name of the residue at ``site`` in polynomial output, e.g. ``r_q14_1`` for ``q14:1``."""
    return "r_" + re.sub(r"\W", "_", site)


def eliminated_conditions(sys: ResidueSystem, lg: LevelGraph, L: int) -> list[str]:
    """Polynomial conditions on the residues for the level-``L`` scaling system.

    Each component's residue-theorem row is used to eliminate its last
    polar site.  The conditions are the nonzero maximal minors of the
    coefficient matrix of the scalings, up to scalar multiples.
    """
    import sympy

    where = dict(sys.site_vertex)
    sym = {v: sympy.Symbol(residue_symbol(v)) for v in sys.variables}
    subs: dict = {}
    for c in sys.constraints:
        if c.kind != "residue-theorem":
            continue
        sup = c.support(sys.variables)
        last = sup[-1]
        k_last = c.coeffs[sys.variables.index(last)]
        expr = -sum(sympy.Rational(k.numerator, k.denominator) * sym[v] for k, v in zip(c.coeffs, sys.variables) if k and v != last)
        subs[sym[last]] = expr / sympy.Rational(k_last.numerator, k_last.denominator)
    verts, rows = _level_rows(sys, lg, L)
    col = {v: i for i, v in enumerate(verts)}
    mat = []
    for c in rows:
        r = [sympy.Integer(0)] * len(verts)
        for k, site in zip(c.coeffs, sys.variables):
            if k:
                r[col[where[site]]] += sympy.Rational(k.numerator, k.denominator) * sym[site].subs(subs)
        mat.append(r)
    ncols = len(verts)
    if len(mat) < ncols:
        return []
    from itertools import combinations

    seen: dict[str, str] = {}
    M = sympy.Matrix(mat)
    for pick in combinations(range(len(mat)), ncols):
        det = sympy.expand(M.extract(list(pick), list(range(ncols))).det())
        if det == 0:
            continue
        poly = sympy.Poly(det, *sorted(det.free_symbols, key=str))
        _, prim = poly.primitive()
        if prim.LC() < 0:
            prim = -prim
        key = str(prim.as_expr())
        seen.setdefault(key, key)
    return sorted(seen)


# ----------------------------------------------------------------------
# full membership pipeline


@dataclass(frozen=True)
class Candidate:
    level_graph: LevelGraph
    twisted_type: TwistedDiffType
    system: ResidueSystem
    feasibility: Feasibility


def grade(sys: ResidueSystem, t: TwistedDiffType, feas: Feasibility, seed: int = 0) -> Feasibility:
    """Attach realizability assumptions and downgrade to ``necessary-conditions feasible``
    when a rational component's residues are not explicitly realized."""
    if not feas.feasible:
        return feas
    from .p1_forms import realizes_two_pole_residue

    g = t.graph
    assumptions = []
    explicit = True
    witness = feas.witness or {}
    for v, gv in g.vertices:
        poles = [site for site, o in t.sites_at(v) if o <= -1]
        if gv > 0:
            if poles and POSITIVE_GENUS_ASSUMPTION not in assumptions:
                assumptions.append(POSITIVE_GENUS_ASSUMPTION)
            continue
        if len(poles) <= 1:
            continue
        if len(poles) == 2 and witness.get(poles[0], 0) != 0 and realizes_two_pole_residue(t.signature(v), seed):
            continue
        explicit = False
    verdict = FEASIBLE
    if not explicit:
        verdict = NECESSARY_ONLY
        assumptions.append(RATIONAL_ASSUMPTION)
    return Feasibility(
        verdict,
        witness=feas.witness,
        certificate=feas.certificate,
        forced_zero=feas.forced_zero,
        polynomials=feas.polynomials,
        assumptions=tuple(assumptions),
        scalings=feas.scalings,
    )


def membership_candidates(g: DualGraph, s: StratumDescriptor, seed: int = 0) -> list[Candidate]:
    """Every compatible (level graph, type) pair with its residue verdict."""
    out = []
    for t in enumerate_twisted_types(g, s):
        for lg in compatible_level_graphs(t):
            sys = build_residue_system(lg, t, s)
            feas = grade(sys, t, feasible_residues(sys, seed), seed)
            out.append(Candidate(lg, t, sys, feas))
    return out


def decide_membership(g: DualGraph, s: StratumDescriptor, seed: int = 0) -> list[tuple[LevelGraph, TwistedDiffType, Feasibility]]:
    return [(c.level_graph, c.twisted_type, c.feasibility) for c in membership_candidates(g, s, seed) if c.feasibility.feasible]
