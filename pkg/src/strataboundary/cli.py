"""Command-line front end.

Every subcommand builds a JSON-compatible report; ``--format table`` renders
that same report as aligned text.  Exit status is 0 on success, 2 on bad
input and 3 when a search would exceed the configured caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import boundary as bd
from .curve_graph import CapExceededError, StratumDescriptor, arithmetic_genus, validate_dual_graph
from .elliptic_divisor import (
    DivisorE,
    EllipticCurveQ,
    EllipticError,
    check_weierstrass_binary,
    differ_by_two_torsion,
    linearly_equivalent,
)
from .fixtures import UnknownFixture, fixture_names, load_fixture
from .level_order import connected_components_above, enumerate_level_structures
from .p1_forms import INF, P1Error, build_p1_differential, residue_at, sample_residue_profiles
from .residues import (
    ResidueError,
    build_residue_system,
    feasible_residues,
    feasible_with_scalings,
    grade,
    membership_candidates,
)
from .serialize import (
    InputError,
    boundary_to_json,
    dumps,
    feasibility_to_json,
    fraction_str,
    graph_from_json,
    levels_from_json,
    loads,
    orders_from_json,
    parse_fraction,
    system_to_json,
)
from .twisted_type import check_condition3, check_type, compatible_level_graphs, enumerate_twisted_types

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 2, 3


class ArgumentError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 as well, but we want our own message path
        raise ArgumentError(message)


def read_json_arg(value: str, where: str) -> Any:
    """Inline JSON, or the path of a file holding it."""
    text = value
    if not value.lstrip().startswith(("{", "[")):
        try:
            with open(value, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{where}: cannot read {value!r}: {exc.strerror}") from exc
    return loads(text, where)


def parse_mu(values: Sequence[str]) -> tuple[int, ...]:
    out = []
    for v in values:
        for part in str(v).split(","):
            part = part.strip()
            if part:
                try:
                    out.append(int(part))
                except ValueError as exc:
                    raise InputError(f"--mu: {part!r} is not an integer") from exc
    return tuple(out)


def caps_from(args: argparse.Namespace) -> tuple[int, int]:
    v = args.cap_vertices if args.cap_vertices is not None else int(os.environ.get("STRATA_CAP_VERTICES", 6))
    e = args.cap_edges if args.cap_edges is not None else int(os.environ.get("STRATA_CAP_EDGES", 8))
    return v, e


def load_graph(args: argparse.Namespace):
    graph, stratum = graph_from_json(read_json_arg(args.graph, "--graph"), "graph")
    if stratum is None:
        raise InputError("graph: 'genus' and 'mu' are required")
    if args.symmetrize:
        stratum = StratumDescriptor(stratum.genus, stratum.mu, symmetrize=True)
    return graph, stratum


def require_valid(graph, stratum) -> None:
    rep = validate_dual_graph(graph, stratum)
    if not rep.ok:
        raise InputError("graph: " + "; ".join(rep.violations))


# ----------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> dict:
    graph, stratum = load_graph(args)
    rep = validate_dual_graph(graph, stratum)
    out: dict[str, Any] = {"valid": rep.ok, "violations": rep.violations}
    if graph.is_connected():
        out["arithmetic_genus"] = arithmetic_genus(graph)
    return out


def cmd_levels(args) -> dict:
    graph, stratum = load_graph(args)
    require_valid(graph, stratum)
    lgs = enumerate_level_structures(graph)
    out: dict[str, Any] = {"count": len(lgs), "level_graphs": [dict(lg.level) for lg in lgs]}
    if args.levels is not None:
        lg = levels_from_json(read_json_arg(args.levels, "--levels"), graph)
        L = args.level if args.level is not None else lg.bottom_level()
        out["components_above"] = [
            {
                "level": L,
                "vertices": sorted(c.vertices),
                "edges_to_level": [e for e, _ in c.edges_to_level],
                "edges_below": [e for e, _ in c.edges_below],
                "has_marked_pole": c.has_marked_pole,
            }
            for c in connected_components_above(lg, L)
        ]
    return out


def cmd_twisted(args) -> dict:
    graph, stratum = load_graph(args)
    require_valid(graph, stratum)
    if args.orders is not None:
        t = orders_from_json(read_json_arg(args.orders, "--orders"), graph)
        rep = check_type(t, stratum)
        out: dict[str, Any] = {"valid": rep.ok, "violations": rep.violations}
        if args.levels is not None:
            lg = levels_from_json(read_json_arg(args.levels, "--levels"), graph)
            out["condition3"] = check_condition3(lg, t)
        if rep.ok:
            out["compatible_level_graphs"] = [dict(lg.level) for lg in compatible_level_graphs(t)]
        return out
    types = enumerate_twisted_types(graph, stratum)
    return {
        "count": len(types),
        "types": [
            {"half_edge_orders": dict(t.half_edge_order), "compatible_level_graphs": [dict(lg.level) for lg in compatible_level_graphs(t)]}
            for t in types
        ],
    }


def cmd_residues(args) -> dict:
    graph, stratum = load_graph(args)
    require_valid(graph, stratum)
    lg = levels_from_json(read_json_arg(args.levels, "--levels"), graph)
    t = orders_from_json(read_json_arg(args.orders, "--orders"), graph)
    try:
        sys_ = build_residue_system(lg, t, stratum)
    except ResidueError as exc:
        raise InputError(str(exc)) from exc
    out: dict[str, Any] = {"system": system_to_json(sys_)}
    out["feasibility"] = feasibility_to_json(grade(sys_, t, feasible_residues(sys_, args.seed), args.seed))
    if args.base is not None:
        raw = read_json_arg(args.base, "--base")
        if not isinstance(raw, dict):
            raise InputError("--base: expected an object mapping sites to rationals")
        base = {str(k): parse_fraction(v, f"--base.{k}") for k, v in raw.items()}
        try:
            out["scalings"] = feasibility_to_json(feasible_with_scalings(lg, t, stratum, base, eliminate=args.eliminate))
        except ResidueError as exc:
            raise InputError(f"--base: {exc}") from exc
    return out


def cmd_membership(args) -> dict:
    graph, stratum = load_graph(args)
    require_valid(graph, stratum)
    cands = membership_candidates(graph, stratum, args.seed)
    feasible = [c for c in cands if c.feasibility.feasible]
    return {
        "feasible_configurations": len(feasible),
        "candidates": [
            {
                "levels": dict(c.level_graph.level),
                "orders": dict(c.twisted_type.half_edge_order),
                "feasibility": feasibility_to_json(c.feasibility),
            }
            for c in cands
        ],
    }


def cmd_boundary(args) -> dict:
    mu = parse_mu(args.mu)
    try:
        stratum = StratumDescriptor(args.genus, mu, symmetrize=args.symmetrize)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = bd.enumerate_boundary(stratum, args.max_vertices, args.max_edges, seed=args.seed,
                                   prune=not args.no_prune, caps=caps_from(args))
    return boundary_to_json(report)


def _point_json(p) -> Any:
    return "inf" if p == INF else fraction_str(p)


def cmd_p1(args) -> dict:
    if args.sample is not None:
        orders = parse_mu([args.sample])
        try:
            stats = sample_residue_profiles(orders, args.trials, args.seed)
        except P1Error as exc:
            raise InputError(f"--sample: {exc}") from exc
        return {
            "orders": list(stats.orders),
            "trials": stats.trials,
            "all_pole_residues_zero": stats.all_zero,
            "some_pole_residue_zero": stats.some_zero,
            "examples": [
                {"points": [fraction_str(p) for p in ex["points"]], "residues": [fraction_str(r) for r in ex["residues"]]}
                for ex in stats.examples
            ],
        }
    if args.support is None:
        raise InputError("p1: give --support or --sample")
    raw = read_json_arg(args.support, "--support")
    if not isinstance(raw, list):
        raise InputError("--support: expected a list of [point, order] pairs")
    try:
        w = build_p1_differential(raw, parse_fraction(args.scale, "--scale"))
    except (P1Error, TypeError, ValueError) as exc:
        raise InputError(f"--support: {exc}") from exc
    return {
        "scale": fraction_str(w.scale),
        "divisor": [
            {"point": _point_json(p), "order": m, "residue": fraction_str(residue_at(w, p))}
            for p, m in w.divisor().items()
        ],
    }


def _parse_point(E: EllipticCurveQ, raw: Any, where: str):
    if raw == "O" or raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != 2:
        raise InputError(f"{where}: expected [x, y] or \"O\"")
    x, y = parse_fraction(raw[0], where + ".x"), parse_fraction(raw[1], where + ".y")
    if not E.contains((x, y)):
        raise InputError(f"{where}: ({fraction_str(x)}, {fraction_str(y)}) is not on the curve")
    return (x, y)


def _parse_divisor(E: EllipticCurveQ, value: str, where: str) -> DivisorE:
    raw = read_json_arg(value, where)
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list of [x, y, mult] or [\"O\", mult]")
    entries = []
    for i, item in enumerate(raw):
        w = f"{where}[{i}]"
        if isinstance(item, list) and len(item) == 2 and item[0] == "O":
            entries.append((None, _mult(item[1], w)))
        elif isinstance(item, list) and len(item) == 3:
            entries.append((_parse_point(E, item[:2], w), _mult(item[2], w)))
        else:
            raise InputError(f"{w}: expected [x, y, mult] or [\"O\", mult]")
    return DivisorE.of(entries)


def _mult(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{where}: multiplicity must be an integer")
    return v


def _point_out(P) -> Any:
    return "O" if P is None else [fraction_str(P[0]), fraction_str(P[1])]


def cmd_elliptic(args) -> dict:
    parts = [p for p in args.curve.split(",")]
    if len(parts) != 2:
        raise InputError("--curve: expected 'a,b'")
    try:
        E = EllipticCurveQ(parse_fraction(parts[0], "--curve.a"), parse_fraction(parts[1], "--curve.b"))
    except EllipticError as exc:
        raise InputError(f"--curve: {exc}") from exc
    out: dict[str, Any] = {"curve": {"a": fraction_str(E.a), "b": fraction_str(E.b)}}
    if args.d1 is not None and args.d2 is not None:
        D1, D2 = _parse_divisor(E, args.d1, "--d1"), _parse_divisor(E, args.d2, "--d2")
        out["linearly_equivalent"] = linearly_equivalent(E, D1, D2)
        out["sums"] = [_point_out(D1.total(E)), _point_out(D2.total(E))]
    if args.zs is not None:
        zs = _parse_divisor(E, args.zs, "--zs")
        raw = read_json_arg(args.qs or "[]", "--qs")
        if not isinstance(raw, list):
            raise InputError("--qs: expected a list of points")
        qs = [_parse_point(E, q, f"--qs[{i}]") for i, q in enumerate(raw)]
        try:
            out["weierstrass_binary"] = check_weierstrass_binary(E, zs, qs)
        except EllipticError as exc:
            raise InputError(str(exc)) from exc
    if args.two_torsion is not None:
        raw = read_json_arg(args.two_torsion, "--two-torsion")
        if not isinstance(raw, list) or len(raw) != 2:
            raise InputError("--two-torsion: expected [z, q]")
        z, q = _parse_point(E, raw[0], "--two-torsion[0]"), _parse_point(E, raw[1], "--two-torsion[1]")
        out["differ_by_two_torsion"] = differ_by_two_torsion(E, z, q)
    return out


def cmd_fixtures(args) -> dict:
    if args.name is None:
        return {"fixtures": fixture_names()}
    try:
        fx = load_fixture(args.name)
    except UnknownFixture as exc:
        raise InputError(f"unknown fixture {args.name!r}; available: {', '.join(fixture_names())}") from exc
    data = fx.to_json()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        stem = os.path.join(args.out, fx.name)
        _write(stem + ".graph.json", data["graph"])
        for key, lv in data["levels"].items():
            _write(f"{stem}.levels.{key}.json", lv)
        for key, od in data["orders"].items():
            _write(f"{stem}.orders.{key}.json", od)
    return data


def _write(path: str, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj) + "\n")


COMMANDS = {
    "validate": cmd_validate,
    "levels": cmd_levels,
    "twisted": cmd_twisted,
    "residues": cmd_residues,
    "membership": cmd_membership,
    "boundary": cmd_boundary,
    "p1": cmd_p1,
    "elliptic": cmd_elliptic,
    "fixtures": cmd_fixtures,
}


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--symmetrize", action="store_true", help="identify marked points of equal order")
    common.add_argument("--cap-vertices", type=int, default=None)
    common.add_argument("--cap-edges", type=int, default=None)

    p = Parser(prog="strataboundary", description="Boundary combinatorics of strata of differentials.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def graph_cmd(name: str, help_: str):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--graph", required=True, help="graph JSON (inline or file)")
        return sp

    graph_cmd("validate", "check a dual graph against its stratum")
    sp = graph_cmd("levels", "enumerate level graphs")
    sp.add_argument("--levels")
    sp.add_argument("--level", type=int)
    sp = graph_cmd("twisted", "enumerate or check twisted types")
    sp.add_argument("--orders")
    sp.add_argument("--levels")
    sp = graph_cmd("residues", "residue system of a level graph and type")
    sp.add_argument("--levels", required=True)
    sp.add_argument("--orders", required=True)
    sp.add_argument("--base", help="residues to rescale level by level")
    sp.add_argument("--eliminate", action="store_true", help="report polynomial conditions on the base residues")
    graph_cmd("membership", "all compatible configurations with their verdicts")

    sp = sub.add_parser("boundary", parents=[common], help="enumerate boundary loci of a stratum")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--mu", nargs="+", required=True)
    sp.add_argument("--max-vertices", type=int, default=3)
    sp.add_argument("--max-edges", type=int, default=4)
    sp.add_argument("--no-prune", action="store_true")

    sp = sub.add_parser("p1", parents=[common], help="residues of differentials on the projective line")
    sp.add_argument("--support")
    sp.add_argument("--scale", default="1")
    sp.add_argument("--sample", help="comma-separated orders to sample")
    sp.add_argument("--trials", type=int, default=100)

    sp = sub.add_parser("elliptic", parents=[common], help="divisors on y^2 = x^3 + ax + b")
    sp.add_argument("--curve", required=True, help="'a,b'; write --curve=a,b when a is negative")
    sp.add_argument("--d1")
    sp.add_argument("--d2")
    sp.add_argument("--zs")
    sp.add_argument("--qs")
    sp.add_argument("--two-torsion")

    sp = sub.add_parser("fixtures", parents=[common], help="bundled configurations")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--out")
    return p


# ----------------------------------------------------------------------
# rendering


def render_table(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        if obj and all(isinstance(x, dict) for x in obj):
            keys = list(obj[0])
            rows = [[_scalar(x.get(k)) for k in keys] for x in obj]
            widths = [max(len(k), *(len(r[i]) for r in rows)) for i, k in enumerate(keys)]
            lines.append(pad + "  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip())
            for r in rows:
                lines.append(pad + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        else:
            lines.extend(f"{pad}- {_scalar(x)}" for x in obj)
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _flat_list(v: Any) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v: Any) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, ensure_ascii=False, separators=(",", ":"))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = COMMANDS[args.command](args)
    except CapExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, EllipticError, P1Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "table":
        text = render_table(report)
        if args.command == "boundary":
            text = report["summary"]["text"] + "\n" + text
        print(text)
    else:
        print(dumps(report))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
