"""JSON encodings of graphs, level functions, types and reports.

Rationals are written as ``"p/q"`` strings (always with a denominator) so
that no floating point value ever enters or leaves the package.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .curve_graph import DualGraph, Edge, InvalidGraphError, Leg, StratumDescriptor
from .level_order import LevelError, LevelGraph
from .residues import Feasibility, ResidueSystem
from .twisted_type import TwistedDiffType


class InputError(ValueError):
    """Malformed user input; the message names the offending location."""


def fraction_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(value: Any, where: str = "value") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{where}: expected an integer or a 'p/q' string, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: cannot read {value!r} as a rational") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def loads(text: str, where: str = "input") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


# ----------------------------------------------------------------------
# graphs


def graph_to_json(g: DualGraph, s: StratumDescriptor | None = None) -> dict:
    out: dict[str, Any] = {}
    if s is not None:
        out["genus"] = s.genus
        out["mu"] = list(s.mu)
    out["vertices"] = [{"id": v, "genus": gv} for v, gv in g.vertices]
    out["edges"] = [{"id": e.id, "ends": list(e.ends)} for e in g.edges]
    out["legs"] = [{"id": leg.id, "vertex": leg.vertex, "order": leg.order} for leg in g.legs]
    return out


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}")
    return value


def _str(value: Any, where: str) -> str:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise InputError(f"{where}: expected an identifier, got {value!r}")
    return str(value)


def _list(obj: Mapping, key: str, where: str) -> list:
    value = obj.get(key, [])
    if not isinstance(value, list):
        raise InputError(f"{where}.{key}: expected a list")
    return value


def graph_from_json(obj: Any, where: str = "graph") -> tuple[DualGraph, StratumDescriptor | None]:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    verts = _list(obj, "vertices", where)
    if not verts:
        raise InputError(f"{where}.vertices: the graph has no vertices")
    vertices = []
    for i, v in enumerate(verts):
        w = f"{where}.vertices[{i}]"
        if not isinstance(v, dict) or "id" not in v or "genus" not in v:
            raise InputError(f"{w}: expected {{'id', 'genus'}}")
        vertices.append((_str(v["id"], w + ".id"), _int(v["genus"], w + ".genus")))
    edges = []
    for i, e in enumerate(_list(obj, "edges", where)):
        w = f"{where}.edges[{i}]"
        if not isinstance(e, dict) or "id" not in e or not isinstance(e.get("ends"), list) or len(e["ends"]) != 2:
            raise InputError(f"{w}: expected {{'id', 'ends': [u, v]}}")
        edges.append(Edge(_str(e["id"], w + ".id"), (_str(e["ends"][0], w + ".ends[0]"), _str(e["ends"][1], w + ".ends[1]"))))
    legs = []
    for i, leg in enumerate(_list(obj, "legs", where)):
        w = f"{where}.legs[{i}]"
        if not isinstance(leg, dict) or not {"id", "vertex", "order"} <= set(leg):
            raise InputError(f"{w}: expected {{'id', 'vertex', 'order'}}")
        legs.append(Leg(_str(leg["id"], w + ".id"), _str(leg["vertex"], w + ".vertex"), _int(leg["order"], w + ".order")))
    try:
        graph = DualGraph(tuple(vertices), tuple(edges), tuple(legs))
    except InvalidGraphError as exc:
        raise InputError(f"{where}: {exc}") from exc
    stratum = None
    if "genus" in obj or "mu" in obj:
        genus = _int(obj.get("genus"), where + ".genus")
        mu = obj.get("mu")
        if not isinstance(mu, list):
            raise InputError(f"{where}.mu: expected a list of integers")
        try:
            stratum = StratumDescriptor(genus, tuple(_int(m, f"{where}.mu[{i}]") for i, m in enumerate(mu)))
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from exc
    return graph, stratum


# ----------------------------------------------------------------------
# levels and orders


def levels_to_json(lg: LevelGraph) -> dict:
    return {"levels": dict(lg.level)}


def levels_from_json(obj: Any, graph: DualGraph, where: str = "levels") -> LevelGraph:
    if isinstance(obj, dict) and "levels" in obj:
        obj = obj["levels"]
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected {{'levels': {{vertex: int}}}}")
    lv = {str(k): _int(v, f"{where}.{k}") for k, v in obj.items()}
    missing = [v for v in graph.vertex_ids if v not in lv]
    if missing:
        raise InputError(f"{where}: no level for vertices {missing}")
    unknown = sorted(set(lv) - set(graph.vertex_ids))
    if unknown:
        raise InputError(f"{where}: unknown vertices {unknown}")
    if any(x > 0 for x in lv.values()):
        raise InputError(f"{where}: levels must be nonpositive")
    try:
        return LevelGraph.from_mapping(graph, lv, normalize=True)
    except LevelError as exc:
        raise InputError(f"{where}: {exc}") from exc


def orders_to_json(t: TwistedDiffType) -> dict:
    return {"half_edge_orders": dict(t.half_edge_order)}


def orders_from_json(obj: Any, graph: DualGraph, where: str = "orders") -> TwistedDiffType:
    if isinstance(obj, dict) and "half_edge_orders" in obj:
        obj = obj["half_edge_orders"]
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected {{'half_edge_orders': {{half-edge: int}}}}")
    orders = {str(k): _int(v, f"{where}.{k}") for k, v in obj.items()}
    try:
        return TwistedDiffType.from_mapping(graph, orders)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


# ----------------------------------------------------------------------
# reports


def residues_map(values: Mapping[str, Fraction] | None) -> dict | None:
    if values is None:
        return None
    return {k: fraction_str(v) for k, v in values.items()}


def system_to_json(sys: ResidueSystem) -> dict:
    return {
        "variables": list(sys.variables),
        "constraints": [
            {"kind": c.kind, "label": c.label, "coeffs": [fraction_str(x) for x in c.coeffs]} for c in sys.constraints
        ],
        "nonzero_sites": list(sys.nonzero_sites),
        "obstructed": [{"vertex": v, "poles": list(p)} for v, p in sys.obstructed],
        "grc_extra_rank": sys.grc_extra_rank(),
        "extra_rank": sys.extra_rank(),
    }


def feasibility_to_json(f: Feasibility) -> dict:
    out: dict[str, Any] = {
        "verdict": f.verdict,
        "feasible": f.feasible,
        "certificate": f.certificate,
        "witness": residues_map(f.witness),
        "forced_zero": list(f.forced_zero),
        "polynomials": list(f.polynomials),
        "assumptions": list(f.assumptions),
    }
    if f.scalings is not None:
        out["scalings"] = residues_map(f.scalings)
    return out


def record_to_json(rec, s: StratumDescriptor | None = None) -> dict:
    return {
        "graph": graph_to_json(rec.graph, s),
        "levels": dict(rec.level_graph.level),
        "orders": dict(rec.twisted_type.half_edge_order),
        "feasibility": feasibility_to_json(rec.feasibility),
        "dim": rec.dim,
        "pi2_fiber_dim": rec.pi2_fiber_dim,
        "grc_extra_rank": rec.grc_extra_rank,
        "extra_rank": rec.extra_rank,
        "tags": list(rec.tags),
    }


def boundary_to_json(report) -> dict:
    s = report.stratum
    n = len(report.divisorial())
    return {
        "stratum": {"genus": s.genus, "mu": list(s.mu)},
        "summary": {
            "target_dimension": report.target,
            "divisorial_loci": n,
            "text": f"{n} divisorial loci",
            "counts_by_dimension": {str(k): v for k, v in report.counts_by_dimension().items()},
            "rejected": len(report.rejected),
        },
        "records": [record_to_json(r, s) for r in report.records],
        "rejected": [
            {
                "graph": graph_to_json(j.graph, s),
                "levels": dict(j.level_graph.level),
                "orders": dict(j.twisted_type.half_edge_order),
                "reason": j.reason,
                "detail": j.detail,
            }
            for j in report.rejected
        ],
    }
