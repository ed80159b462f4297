"""Command line entry point: ``gorbit <command> [options]``."""
from __future__ import annotations

import argparse
import json
import sys

from . import catalog, geodesic, isotropy
from .algebra import build_classical
from .errors import GorbitError
from .representations import build_rep
from .spaces import load_space

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _metric_from(args) -> geodesic.MetricSpec:
    if any(v is not None for v in (args.a, args.b, args.c)):
        return geodesic.MetricSpec.coupled(
            1.0 if args.a is None else args.a, 1.0 if args.b is None else args.b,
            0.0 if args.c is None else args.c, args.x0)
    return geodesic.MetricSpec.diagonal(1.0 if args.x is None else args.x,
                                        1.0 if args.y is None else args.y, args.x0)


def cmd_build_space(args) -> int:
    space = load_space(args.space)
    _emit(json.dumps(space.summary(), indent=2), args.out)
    return EXIT_OK


def cmd_check_go(args) -> int:
    space = load_space(args.space)
    report = geodesic.go_decision(space, _metric_from(args), args.samples, args.seed, args.tol)
    _emit(report.to_json(witnesses=args.witnesses), args.out)
    return EXIT_FAIL if args.assert_ and not report.is_go else EXIT_OK


def cmd_scan(args) -> int:
    space = load_space(args.space)
    grid = geodesic.parse_grid(args.grid)
    base = {k: getattr(args, k) for k in ("x", "y", "a", "b", "c") if getattr(args, k) is not None}
    base["x0"] = args.x0
    specs = geodesic.grid_specs(grid, base)
    rows = geodesic.scan_metrics(space, specs, args.samples, args.seed, args.tol, workers=args.workers)
    if args.format == "json":
        _emit(json.dumps(rows, indent=2), args.out)
    else:
        _emit(geodesic.rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_isotropy(args) -> int:
    if args.space:
        rep = isotropy.isotropy_rep(load_space(args.space), args.factor)
    else:
        if not args.algebra or not args.rep:
            raise GorbitError("isotropy needs --space or both --algebra and --rep")
        family, _, n = args.algebra.partition(":")
        rep = build_rep(build_classical(family, int(n)), args.rep)
    report = isotropy.generic_stabilizer(rep, args.trials, args.seed)
    _emit(report.to_json(), args.out)
    return EXIT_OK


def cmd_validate_catalog(args) -> int:
    entries = [catalog.lookup(c) for c in args.case] if args.case else list(catalog.load_pairs())
    results, failed = [], 0
    for entry in entries:
        checks = catalog.validate_entry(entry, build=args.build)
        ok = all(v.ok for v in checks)
        row = {
            "case": entry.case_id,
            "ok": ok,
            "constructible": entry.constructible,
            "needs_review": entry.needs_review,
            "checks": [{"n": v.n, "ok": v.ok, "dim_g": [v.dim_g1, v.dim_g2], "dim_k": v.dim_k,
                        "real_dim": [v.real_dim1, v.real_dim2], "c": [v.c1, v.c2],
                        "message": v.message} for v in checks],
            "alarm": catalog.theorem_alarm_from_tags(entry),
        }
        if args.isotropy and entry.constructible:
            cross = catalog.cross_check_isotropy(entry, args.trials, args.seed)
            row["isotropy"] = cross
            ok = ok and cross["match"] and not cross["alarm"]
            row["ok"] = ok
        failed += not ok or row["alarm"]
        results.append(row)
    summary = {"entries": len(results), "failed": failed, "counts": catalog.counts(), "results": results}
    _emit(json.dumps(summary, indent=2), args.out)
    return EXIT_FAIL if args.assert_ and failed else EXIT_OK


def _add_common(p: argparse.ArgumentParser, metric: bool = True) -> None:
    p.add_argument("--space", help="space description: inline JSON or a file path")
    if metric:
        p.add_argument("--x0", type=float, default=1.0)
        for name in ("x", "y", "a", "b", "c"):
            p.add_argument(f"--{name}", type=float, default=None)
        p.add_argument("--samples", type=int, default=200)
        p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit 1 on NOT_GO or validation failure")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gorbit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-space", help="summarize a pair space")
    _add_common(p, metric=False)
    p.set_defaults(func=cmd_build_space)

    p = sub.add_parser("check-go", help="sampled geodesic orbit test for one metric")
    _add_common(p)
    p.add_argument("--witnesses", action="store_true", help="include witness vectors")
    p.set_defaults(func=cmd_check_go)

    p = sub.add_parser("scan", help="GO decisions over a metric grid")
    _add_common(p)
    p.add_argument("--grid", required=True, help='e.g. "x=0.25:3:0.25,y=0.25:3:0.25"')
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("isotropy", help="generic stabilizer of a module")
    _add_common(p, metric=False)
    p.add_argument("--factor", type=int, choices=(1, 2), default=1,
                   help="with --space: which isotropy module")
    p.add_argument("--algebra", help="e.g. so:7")
    p.add_argument("--rep", help="construction tree, e.g. alt2(defining)")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_isotropy)

    p = sub.add_parser("validate-catalog", help="dimension checks over the case table")
    _add_common(p, metric=False)
    p.add_argument("--case", action="append", help="restrict to a case id (repeatable)")
    p.add_argument("--no-build", dest="build", action="store_false",
                   help="skip constructing the spaces")
    p.add_argument("--isotropy", action="store_true",
                   help="also compare generic stabilizers of constructible entries")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_validate_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("build-space", "check-go", "scan") and not args.space:
        parser.error("--space is required")
    try:
        return args.func(args)
    except (GorbitError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        print(f"gorbit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
