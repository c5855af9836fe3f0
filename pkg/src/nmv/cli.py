"""Command-line front end.

    nmv monomial FILE [--method mixed-volume|oracle|both] [--grid-offset K] [--grid-width W]
    nmv degree-formula FILE
    nmv linear FILE
    nmv graph FILE
    nmv formula perfect-ht2 --r 2 --deltas 1 --mu 1,1
    nmv formula gorenstein-ht3 --r 3 --deltas '' --mp 4 --big-d 1 --delta-p 2

Reports go to stdout as canonical JSON; diagnostics go to stderr.
Exit codes: 0 ok, 1 internal error or failed cross-check, 2 parse/validation
error, 3 hypothesis violation, 4 oracle stability failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import closed_formulas as cf
from .engine import (
    BaseLocusError,
    base_locus,
    base_locus_mixed_multiplicities,
    generic_finiteness_check,
    graph_multidegrees,
    monomial_multidegrees,
    upper_bound_check,
)
from .linear_multiview import (
    CameraConfig,
    CameraRankError,
    camera_base_points,
    coordinate_alignment_export,
    multidegree_support,
)
from .maps import MapSpec, bound_product
from .monomial_algebra import MonomialError
from .oracle import StabilityError, saturated_fiber_mixed_multiplicities
from .polyhedral import PolytopeError

log = logging.getLogger("nmv")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3
EXIT_STABILITY = 4


class CliError(Exception):
    def __init__(self, message: str, code: int, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2)


def load_problem(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read problem file {path}: {exc}", EXIT_INPUT) from exc
    if not isinstance(data, dict):
        raise CliError("problem file must hold a JSON object", EXIT_INPUT)
    if ("ideals" in data) == ("cameras" in data):
        raise CliError("problem file needs exactly one of 'ideals' or 'cameras'", EXIT_INPUT)
    return data


def spec_from_problem(data: dict) -> MapSpec:
    if "ideals" not in data:
        raise CliError("this command needs an 'ideals' block", EXIT_INPUT)
    variables = data.get("variables")
    if not variables:
        raise CliError("monomial problems need a 'variables' list", EXIT_INPUT)
    try:
        return MapSpec.parse(variables, data["ideals"])
    except (MonomialError, TypeError, ValueError) as exc:
        raise CliError(f"invalid ideals: {exc}", EXIT_INPUT) from exc


def cameras_from_problem(data: dict) -> CameraConfig:
    if "cameras" not in data:
        raise CliError("this command needs a 'cameras' block", EXIT_INPUT)
    try:
        return CameraConfig.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise CliError(f"invalid cameras: {exc}", EXIT_INPUT) from exc


def _grid_args(args, data: dict, r: int) -> tuple[int | None, int | None]:
    grid = data.get("grid", {}) or {}
    offset = args.grid_offset if getattr(args, "grid_offset", None) is not None else grid.get("offset")
    width = args.grid_width if getattr(args, "grid_width", None) is not None else grid.get("width")
    if offset is not None and (not isinstance(offset, int) or offset < 0):
        raise CliError(f"grid offset must be a nonnegative integer, got {offset!r}", EXIT_INPUT)
    if width is not None and (not isinstance(width, int) or width < r + 2):
        raise CliError(f"grid width must be an integer >= r + 2 = {r + 2}, got {width!r}", EXIT_INPUT)
    return offset, width


def cmd_monomial(args) -> dict:
    data = load_problem(args.file)
    spec = spec_from_problem(data)
    method = args.method or data.get("method") or "mixed-volume"
    if method not in ("mixed-volume", "oracle", "both"):
        raise CliError(f"unknown method {method!r}", EXIT_INPUT)
    offset, width = _grid_args(args, data, spec.r)
    report: dict = {"r": spec.r, "p": spec.p, "deltas": list(spec.deltas), "targets": list(spec.targets)}
    tables = {}
    if method in ("mixed-volume", "both"):
        tables["mixed-volume"] = monomial_multidegrees(spec)
    if method in ("oracle", "both"):
        tables["oracle"] = saturated_fiber_mixed_multiplicities(spec, offset, width)
    main = tables.get("mixed-volume") or tables["oracle"]
    report.update(main.to_json())
    report["generically_finite"] = generic_finiteness_check(spec)
    report["upper_bound_holds"] = upper_bound_check(spec, main)
    if method == "both":
        consistent = tables["mixed-volume"].same_values(tables["oracle"])
        report["method"] = "both"
        report["tables"] = {k: t.to_json() for k, t in tables.items()}
        report["consistent"] = consistent
        if not consistent:
            raise CliError("mixed-volume and oracle tables disagree", EXIT_INTERNAL, report)
    return report


def cmd_degree_formula(args) -> dict:
    data = load_problem(args.file)
    spec = spec_from_problem(data)
    offset, width = _grid_args(args, data, spec.r)
    locus = base_locus(spec)
    if locus.dimension > 0:
        names = spec.variables
        prime = locus.offending_prime()
        raise CliError(
            f"base locus has dimension {locus.dimension}; minimal prime ({', '.join(names[i] for i in prime)})",
            EXIT_HYPOTHESIS,
            {"base_locus": locus.to_json(names), "offending_prime": [names[i] for i in prime]},
        )
    mults = base_locus_mixed_multiplicities(spec, offset, width)
    mv = monomial_multidegrees(spec)
    rows = []
    agree = True
    for d in spec.types():
        bound = bound_product(spec.deltas, d)
        diff = bound - mults[d]
        agree &= diff == mv.entries[d]
        rows.append({"type": list(d), "bound": bound, "base_locus": mults[d], "value": diff,
                     "mixed_volume": mv.entries[d]})
    report = {
        "r": spec.r,
        "p": spec.p,
        "method": "degree-formula",
        "base_locus": locus.to_json(spec.variables),
        "generically_finite": generic_finiteness_check(spec),
        "entries": rows,
        "agrees_with_mixed_volume": agree,
    }
    return report


def cmd_linear(args) -> dict:
    data = load_problem(args.file)
    cfg = cameras_from_problem(data)
    try:
        support = multidegree_support(cfg)
        points = camera_base_points(cfg)
    except CameraRankError as exc:
        raise CliError(str(exc), EXIT_HYPOTHESIS) from exc
    report = support.to_json()
    report["base_points"] = [list(pt) for pt in points]
    spec = coordinate_alignment_export(cfg)
    report["coordinate_aligned"] = spec is not None
    if spec is not None:
        offset, width = _grid_args(args, data, spec.r)
        oracle = saturated_fiber_mixed_multiplicities(spec, offset, width)
        mv = monomial_multidegrees(spec)
        report["oracle_agrees"] = oracle.same_values(support)
        report["mixed_volume_agrees"] = mv.same_values(support)
        if not (report["oracle_agrees"] and report["mixed_volume_agrees"]):
            raise CliError("criterion table disagrees with the monomial computation", EXIT_INTERNAL, report)
    return report


def cmd_graph(args) -> dict:
    data = load_problem(args.file)
    spec = spec_from_problem(data)
    offset, width = _grid_args(args, data, spec.r)
    graph = graph_multidegrees(spec, offset, width)
    report = graph.to_json()
    mv = monomial_multidegrees(spec)
    report["zero_slice_matches_multidegrees"] = graph.zero_slice() == mv.entries
    return report


def _int_list(text: str | None) -> tuple[int, ...]:
    if text is None or not text.strip():
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise CliError(f"expected a comma-separated integer list, got {text!r}", EXIT_INPUT) from exc


def cmd_formula(args) -> dict:
    deltas = _int_list(args.deltas)
    try:
        if args.family == cf.PERFECT_HT2:
            inp = cf.FamilyInput(args.r, deltas, cf.PERFECT_HT2, mu=_int_list(args.mu), delta_p=args.delta_p)
            table = cf.perfect_ht2_table(inp)
        else:
            inp = cf.FamilyInput(args.r, deltas, cf.GORENSTEIN_HT3, mp=args.mp, big_d=args.big_d,
                                 delta_p=args.delta_p)
            table = cf.gorenstein_ht3_table(inp)
    except cf.FormulaError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    report = table.to_json()
    report["family"] = args.family
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nmv", description="Multidegrees of nonlinear multiview varieties.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_grid(p):
        p.add_argument("--grid-offset", type=int, default=None)
        p.add_argument("--grid-width", type=int, default=None)
        return p

    p = with_grid(sub.add_parser("monomial", help="multidegrees of a monomial map"))
    p.add_argument("file")
    p.add_argument("--method", choices=["mixed-volume", "oracle", "both"], default=None)
    p.set_defaults(func=cmd_monomial)

    p = with_grid(sub.add_parser("degree-formula", help="Bezout bound minus base-locus multiplicities"))
    p.add_argument("file")
    p.set_defaults(func=cmd_degree_formula)

    p = with_grid(sub.add_parser("linear", help="support of a linear multiview variety"))
    p.add_argument("file")
    p.set_defaults(func=cmd_linear)

    p = with_grid(sub.add_parser("graph", help="multidegrees of the graph of the map"))
    p.add_argument("file")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("formula", help="closed formulas for structured families")
    p.add_argument("family", choices=[cf.PERFECT_HT2, cf.GORENSTEIN_HT3])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--deltas", default="")
    p.add_argument("--mu", default=None)
    p.add_argument("--mp", type=int, default=None)
    p.add_argument("--big-d", type=int, default=None)
    p.add_argument("--delta-p", type=int, default=None)
    p.set_defaults(func=cmd_formula)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    """Run one command; returns the exit code.  ``out`` defaults to stdout."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        report = args.func(args)
    except CliError as exc:
        log.error("%s", exc)
        if exc.report is not None:
            out.write(dumps({**exc.report, "error": str(exc)}) + "\n")
        return exc.code
    except StabilityError as exc:
        log.error("oracle grid did not stabilize: %s", exc)
        return EXIT_STABILITY
    except (BaseLocusError, CameraRankError) as exc:
        log.error("%s", exc)
        return EXIT_HYPOTHESIS
    except (MonomialError, PolytopeError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL
    out.write(dumps(report) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
