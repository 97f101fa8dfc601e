"""Command-line interface: ``tafkit <command> ...`` (or ``python -m tafkit``)."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import actors, dung, graph, semantics
from .model import validate
from .semantics import BudgetExceededError, EvalContext, Labelling

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _threads(value) -> int:
    if value is not None:
        return value
    return semantics.default_threads()


def _read_json(path: str):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise graph.GraphFormatError(f"{path}: invalid JSON: {err}") from None


def load_framework(path: str, args):
    """Read a T-AIF graph, a projected T-AF, or a plain AAF and return a T-AF."""
    data = _read_json(path)
    if isinstance(data, dict) and "taif-version" in data:
        g = graph.from_json(data)
        cfg = graph.ProjectionConfig(grid=args.grid or 4, composition_depth=args.depth)
        return graph.project(g, cfg)
    if isinstance(data, dict) and "taf-version" in data:
        taf = graph.taf_from_json(data)
        return taf.with_grid(args.grid) if args.grid else taf
    if isinstance(data, dict) and "arguments" in data:
        af = dung.DungAF(data["arguments"], [tuple(p) for p in data.get("attacks", [])])
        taf = dung.embed(af)
        return taf.with_grid(args.grid) if args.grid else taf
    raise graph.GraphFormatError(
        f"{path}: not a T-AIF graph ('taif-version'), T-AF ('taf-version') or AAF ('arguments')")


def _context(taf, args) -> EvalContext:
    return EvalContext(taf, composition_depth=args.depth, budget=args.budget,
                       threads=_threads(args.threads))


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _fmt_labelling(l: Labelling) -> str:
    return " ".join(f"{p}={v}" for p, v in l.items())


# --------------------------------------------------------------------------
# Commands

def cmd_validate(args) -> int:
    try:
        taf = load_framework(args.file, args)
    except (graph.GraphFormatError, graph.ProjectionError, ValueError) as err:
        report = {"valid": False, "violations": [
            {"severity": "error", "rule": type(err).__name__, "element": getattr(err, "pointer", ""),
             "message": str(err)}]}
    else:
        vs = validate(taf)
        report = {"valid": not any(v.severity == "error" for v in vs),
                  "violations": [{"severity": v.severity, "rule": v.rule, "element": v.element,
                                  "message": v.message} for v in vs]}
    if args.format == "json":
        _emit(args, _dump(report))
    else:
        lines = [f"{v['severity']}: {v['rule']} at {v['element']}: {v['message']}"
                 for v in report["violations"]]
        lines.append("valid" if report["valid"] else "invalid")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if report["valid"] else EXIT_INVALID


def cmd_eval(args) -> int:
    taf = load_framework(args.file, args)
    ctx = _context(taf, args)
    raw = _read_json(args.labelling)
    if not isinstance(raw, dict):
        raise graph.GraphFormatError(f"{args.labelling}: expected a JSON object of labels")
    l = Labelling.from_values(taf, raw)
    degree = semantics.evaluate_property(ctx, l, args.property)
    if args.format == "json":
        _emit(args, _dump({"property": args.property, "grid": ctx.k, "degree": str(degree)}))
    else:
        _emit(args, f"{degree}\n")
    return EXIT_OK


def cmd_search(args) -> int:
    taf = load_framework(args.file, args)
    ctx = _context(taf, args)
    results = semantics.best_labellings(ctx, args.property, args.top)
    if args.format == "json":
        _emit(args, _dump({
            "property": args.property, "grid": ctx.k, "depth": ctx.composition_depth,
            "results": [{"rank": i, "degree": str(d), "labelling": l.to_json()}
                        for i, (l, d) in enumerate(results, start=1)]}))
    else:
        lines = [f"#{i} {d} {_fmt_labelling(l)}" for i, (l, d) in enumerate(results, start=1)]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_actors(args) -> int:
    taf = load_framework(args.file, args)
    ctx = _context(taf, args)
    labellings = {}
    for path in args.labellings or []:
        raw = _read_json(path)
        labellings[Path(path).stem] = Labelling.from_values(taf, raw)
    report = actors.actor_report(ctx, labellings)
    if args.format == "text":
        lines = []
        for x, entry in report["actors"].items():
            lines.append(f"{x}: rationality {entry['rationality']}, "
                         f"justified trust {entry['justified_trust']}")
            for name, v in entry.get("trust_compliance", {}).items():
                lines.append(f"  trust compliance [{name}] {v}")
        for x in report["entities"]:
            row = " ".join(f"{y}={v}" for y, v in report["similarity"][x].items())
            lines.append(f"similarity {x}: {row}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump(report))
    return EXIT_OK


def cmd_dung(args) -> int:
    data = _read_json(args.file)
    if not isinstance(data, dict) or "arguments" not in data:
        raise graph.GraphFormatError(f"{args.file}: expected {{'arguments': [...], 'attacks': [...]}}")
    af = dung.DungAF(data["arguments"], [tuple(p) for p in data.get("attacks", [])])
    exts = dung.extensions(af, args.kind)
    ordered = [[a for a in af.arguments if a in e] for e in exts]
    if args.format == "json":
        _emit(args, _dump({"kind": args.kind, "extensions": ordered}))
    elif not ordered:
        _emit(args, f"no {args.kind} extension\n")
    else:
        _emit(args, "".join("{" + ", ".join(e) + "}\n" for e in ordered))
    return EXIT_OK


def cmd_export(args) -> int:
    data = _read_json(args.file)
    if isinstance(data, dict) and "taif-version" in data:
        obj = graph.from_json(data)
    else:
        obj = load_framework(args.file, args)
    _emit(args, graph.export_dot(obj))
    return EXIT_OK


def cmd_project(args) -> int:
    taf = load_framework(args.file, args)
    _emit(args, _dump(graph.taf_to_json(taf)))
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser

def _positive(x: str) -> int:
    v = int(x)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {x}")
    return v


def _nonnegative(x: str) -> int:
    v = int(x)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {x}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", "-k", type=_positive, default=None, metavar="K",
                        help="grid resolution k; truth degrees are 0, 1/k, ..., 1 "
                             "(default: 4 for graphs, the file's own grid otherwise)")
    common.add_argument("--depth", type=_nonnegative, default=2,
                        help="maximum number of scheme compositions (default: 2)")
    common.add_argument("--budget", type=_positive, default=semantics.DEFAULT_BUDGET,
                        help="maximum labelling evaluations before giving up (default: 10000000)")
    common.add_argument("--threads", type=_positive, default=None, metavar="N",
                        help="worker threads for labelling search "
                             "(default: $TAF_THREADS or the number of cores)")
    common.add_argument("--output", "-o", default=None, metavar="PATH",
                        help="write the result to PATH instead of stdout")

    parser = argparse.ArgumentParser(
        prog="tafkit",
        description="Fuzzy Łukasiewicz evaluation of trichotomic argument graphs.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name, fn, help, formats=("text", "json"), default="text"):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.add_argument("--format", choices=formats, default=default,
                       help=f"output format (default: {default})")
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "check a graph or framework for broken invariants")
    p.add_argument("file", help="T-AIF graph, T-AF or AAF JSON file")

    p = add("eval", cmd_eval, "degree to which one labelling has a property")
    p.add_argument("file", help="T-AIF graph, T-AF or AAF JSON file")
    p.add_argument("labelling", help="JSON object mapping every proposition id to a degree")
    p.add_argument("--property", choices=semantics.PROPERTIES, required=True,
                   help="labelling property to evaluate")

    p = add("search", cmd_search, "best labellings for a property by exhaustive search")
    p.add_argument("file", help="T-AIF graph, T-AF or AAF JSON file")
    p.add_argument("--property", choices=semantics.PROPERTIES, required=True,
                   help="labelling property to rank by")
    p.add_argument("--top", type=_positive, default=5, metavar="N",
                   help="number of labellings to report (default: 5)")

    p = add("actors", cmd_actors, "per-actor report: similarity, rationality, justified trust",
            default="json")
    p.add_argument("file", help="T-AIF graph, T-AF or AAF JSON file")
    p.add_argument("--labellings", nargs="*", metavar="FILE",
                   help="labelling files to report trust compliance for")

    p = add("dung", cmd_dung, "classical Dung extensions of an abstract framework")
    p.add_argument("file", help='AAF JSON: {"arguments": [...], "attacks": [[a, b], ...]}')
    p.add_argument("--kind", choices=dung.KINDS, required=True, help="extension kind")

    p = add("export", cmd_export, "render a graph or framework as Graphviz DOT",
            formats=("dot",), default="dot")
    p.add_argument("file", help="T-AIF graph, T-AF or AAF JSON file")

    p = add("project", cmd_project, "reduce a T-AIF graph to T-AF JSON",
            formats=("json",), default="json")
    p.add_argument("file", help="T-AIF graph, T-AF or AAF JSON file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"tafkit: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as err:
        print(f"tafkit: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (graph.GraphFormatError, graph.ProjectionError, ValueError, KeyError) as err:
        print(f"tafkit: {err}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
