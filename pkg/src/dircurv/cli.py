"""Command line interface: analyze, verify, and generate graphs.

Exit codes: 0 ok, 1 CD violation found, 2 parse/usage error, 3 graph not
strongly connected, 4 numerical failure. Reports are byte-deterministic
for identical inputs and options; reals are printed with 12 significant
digits and infinities as the strings "inf" / "-inf".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .curvature import CurvatureReport, verify_graph
from .errors import GraphFormatError, NotStronglyConnectedError, NumericalError
from .graph import (
    complete_bidirected_graph,
    cycle_graph,
    load_graph_text,
    random_strongly_connected_graph,
)

__all__ = ["main", "render_json", "render_csv"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_CONNECTIVITY = 3
EXIT_NUMERIC = 4


def _fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        return '"nan"'
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".12g")


def _bool(b: bool) -> str:
    return "true" if b else "false"


def render_json(report: CurvatureReport, include_verification: bool = False) -> str:
    """Fixed-order JSON rendering of a report (see README for the schema)."""
    rows = ",\n".join(
        '    {"label": %s, "phi": %s, "C": %s, "K_theorem": %s, '
        '"K_optimal": %s, "cd_holds": %s}'
        % (json.dumps(v.label), _fmt(v.phi), _fmt(v.constant),
           _fmt(v.k_theorem), _fmt(v.k_optimal), _bool(v.cd_holds))
        for v in report.vertices)
    parts = [
        f'  "alpha": {_fmt(report.alpha)}',
        f'  "m": {_fmt(report.m)}',
        '  "vertices": [\n%s\n  ]' % rows,
        '  "summary": {"min_K_theorem": %s, "min_K_optimal": %s, "all_cd_hold": %s}'
        % (_fmt(report.min_k_theorem), _fmt(report.min_k_optimal),
           _bool(report.all_cd_hold)),
    ]
    if include_verification:
        parts.append(f'  "samples": {report.samples}')
        parts.append(f'  "seed": {report.seed}')
        parts.append('  "K_override": %s'
                      % ("null" if report.k_override is None else _fmt(report.k_override)))
        if report.violations:
            vrows = ",\n".join(
                '    {"vertex": %s, "index": %d, "K": %s, "residual": %s, "f": [%s]}'
                % (json.dumps(vio.label), vio.index, _fmt(vio.k),
                   _fmt(vio.residual), ", ".join(_fmt(x) for x in vio.f))
                for vio in report.violations)
            parts.append('  "violations": [\n%s\n  ]' % vrows)
        else:
            parts.append('  "violations": []')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def render_csv(report: CurvatureReport) -> str:
    """One row per vertex mirroring the JSON vertex fields."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "phi", "C", "K_theorem", "K_optimal", "cd_holds"])
    for v in report.vertices:
        writer.writerow([
            v.label,
            _fmt(v.phi).strip('"'),
            _fmt(v.constant).strip('"'),
            _fmt(v.k_theorem).strip('"'),
            _fmt(v.k_optimal).strip('"'),
            _bool(v.cd_holds),
        ])
    return buf.getvalue()


def _alpha_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must be a number, got {text!r}")
    if math.isnan(value) or not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError("alpha must lie in [0, 1)")
    return value


def _m_arg(text: str) -> float:
    try:
        value = float(text)  # float() accepts "inf"
    except ValueError:
        raise argparse.ArgumentTypeError(f"m must be a number or 'inf', got {text!r}")
    if math.isnan(value) or value < 1.0:
        raise argparse.ArgumentTypeError("m must be >= 1 (or 'inf')")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("n must be >= 2")
    return value


def _prob_arg(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("p must lie in (0, 1]")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dircurv",
        description="Curvature-dimension analysis of lazy walks on directed graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_alpha_arg, default=0.5,
                        help="walk laziness in [0, 1) (default 0.5)")
    common.add_argument("--m", type=_m_arg, default=2.0,
                        help="dimension parameter in [1, inf]; 'inf' accepted (default 2)")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report format (default json)")
    common.add_argument("--input-format", choices=("auto", "edge-list", "json"),
                        default="auto", help="graph file format (default auto)")
    common.add_argument("--output", default="-",
                        help="report destination, '-' for stdout (default)")
    common.add_argument("graph", metavar="FILE", help="graph file")

    p_analyze = sub.add_parser("analyze", parents=[common],
                               help="per-vertex curvature report")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="report plus randomized falsification")
    p_verify.add_argument("--samples", type=int, default=100,
                          help="random test functions per vertex (default 100)")
    p_verify.add_argument("--seed", type=int, default=0,
                          help="falsification seed (default 0)")
    p_verify.add_argument("--K-override", dest="k_override", type=float, default=None,
                          help="test this K instead of the per-vertex bound")
    p_verify.set_defaults(func=_cmd_verify)

    p_gen = sub.add_parser("gen", help="emit a generated graph as edge-list text")
    p_gen.add_argument("--model", choices=("cycle", "bidirected-complete", "random-sc"),
                       required=True)
    p_gen.add_argument("-n", "--n", type=_positive_int, required=True,
                       help="vertex count (>= 2)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-p", type=_prob_arg, default=0.4,
                       help="edge probability for random-sc (default 0.4)")
    p_gen.add_argument("--output", default="-")
    p_gen.set_defaults(func=_cmd_gen)
    return parser


def _write_output(text: str, destination: str) -> None:
    if destination == "-":
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(args):
    with open(args.graph, "r", encoding="utf-8") as fh:
        text = fh.read()
    return load_graph_text(text, args.input_format)


def _emit_report(report: CurvatureReport, args, include_verification: bool) -> None:
    if args.format == "csv":
        _write_output(render_csv(report), args.output)
    else:
        _write_output(render_json(report, include_verification), args.output)
    flagged = report.c_at_least_one
    if flagged:
        labels = ", ".join(report.vertices[i].label for i in flagged)
        print(f"note: local constant C >= 1 at vertices: {labels}", file=sys.stderr)


def _cmd_analyze(args) -> int:
    g = _load(args)
    report = verify_graph(g, args.alpha, m=args.m, samples=0)
    _emit_report(report, args, include_verification=False)
    return EXIT_OK if report.all_cd_hold else EXIT_VIOLATION


def _cmd_verify(args) -> int:
    g = _load(args)
    report = verify_graph(g, args.alpha, m=args.m, samples=args.samples,
                          seed=args.seed, k_override=args.k_override)
    _emit_report(report, args, include_verification=True)
    for vio in report.violations:
        fvals = ", ".join(format(x, ".6g") for x in vio.f)
        print(f"CD violation at vertex {vio.label}: K={vio.k:.6g} "
              f"residual={vio.residual:.6g} f=[{fvals}]", file=sys.stderr)
    if report.violations or not report.all_cd_hold:
        print(f"{len(report.violations)} violation(s) found", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.model == "cycle":
        g = cycle_graph(args.n)
    elif args.model == "bidirected-complete":
        g = complete_bidirected_graph(args.n)
    else:
        g = random_strongly_connected_graph(args.n, p=args.p, seed=args.seed)
    _write_output(g.to_edge_list_text(), args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GraphFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotStronglyConnectedError as exc:
        print(f"connectivity error: {exc}", file=sys.stderr)
        return EXIT_CONNECTIVITY
    except (NumericalError, ValueError, RuntimeError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
