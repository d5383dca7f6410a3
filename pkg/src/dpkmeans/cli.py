"""Command line entry point.

    dpkmeans run --dataset iris --init dp,origin,random,variance --k 3,4 --out report.json
    dpkmeans datasets list
    dpkmeans verify

Exit codes: 0 success, 1 one or more grid cells failed (or a verify check
failed), 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .harness import DEFAULT_SEEDS, ExperimentReport, ExperimentSpec, compare_methods, run_experiment
from .ingest import REGISTRY, Normalization
from .initializers import Strategy
from .lloyd import EmptyClusterPolicy, LloydConfig
from .report import EXTENSIONS, Format, emit_report

OUT_DIR_ENV = "DPKMEANS_OUT_DIR"


def _csv_list(value):
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_seeds(value):
    """'0..29' (inclusive range), '1,5,9', or a mix: '0..3,10'."""
    seeds = []
    for part in _csv_list(value):
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty seed range {part!r}")
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise argparse.ArgumentTypeError("no seeds given")
    return seeds


def _inits(value):
    try:
        return [Strategy(v) for v in _csv_list(value)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ks(value):
    try:
        ks = [int(v) for v in _csv_list(value)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not ks or any(k < 2 for k in ks):
        raise argparse.ArgumentTypeError("k values must be integers >= 2")
    return ks


def _normalization(value):
    try:
        return Normalization.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = argparse.ArgumentParser(prog="dpkmeans", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"dpkmeans {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment grid and write a report")
    run.add_argument("--dataset", action="append", required=True,
                     help="registry name, name=path, or path to a headerless numeric CSV (repeatable)")
    run.add_argument("--init", type=_inits, default=list(Strategy),
                     help="comma list of dp,origin,random,variance (default: all)")
    run.add_argument("--k", type=_ks, default=[3, 4], help="comma list of cluster counts (default: 3,4)")
    run.add_argument("--seeds", type=parse_seeds, default=None,
                     help="seeds for the random initializer, e.g. 0..29 (default when random is selected)")
    run.add_argument("--normalize", type=_normalization, default=Normalization.MAX_ABS,
                     help="maxabs | minmax | globalmax | none (default: maxabs)")
    run.add_argument("--space", choices=["model", "raw"], default=None,
                     help="space Lloyd runs in for every initializer "
                          "(default: model for dp, raw for the baselines)")
    run.add_argument("--max-iter", type=int, default=300)
    run.add_argument("--empty-cluster", choices=[p.value for p in EmptyClusterPolicy],
                     default=EmptyClusterPolicy.KEEP.value)
    run.add_argument("--data-dir", default=None, help="directory holding the UCI dataset files")
    run.add_argument("--out", default=None,
                     help=f"output file (default: report.<ext> in ${OUT_DIR_ENV} or the working directory)")
    run.add_argument("--format", default=Format.JSON.value, choices=[f.value for f in Format])
    run.add_argument("--metric", default="sse", choices=["sse", "distance_sum"],
                     help="value shown in markdown and SVG output (json and csv carry both)")

    ds = sub.add_parser("datasets", help="dataset registry")
    ds.add_argument("action", choices=["list"])

    ver = sub.add_parser("verify", help="run the brute-force oracle property checks")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--scale", type=float, default=1.0, help="multiply instance counts")

    cmp_ = sub.add_parser("compare", help="rank initializers in a JSON report")
    cmp_.add_argument("report")
    cmp_.add_argument("--metric", default="sse", choices=["sse", "distance_sum"])
    cmp_.add_argument("--space", choices=["own", "raw"], default="own")
    cmp_.add_argument("--allow-mixed-spaces", action="store_true")
    return parser


def _default_out(fmt):
    directory = Path(os.environ.get(OUT_DIR_ENV) or ".")
    return directory / f"report{EXTENSIONS[Format(fmt)]}"


def cmd_run(args, parser):
    inits = args.init
    seeds = args.seeds
    if Strategy.RANDOM in inits:
        seeds = seeds if seeds is not None else list(DEFAULT_SEEDS)
    elif seeds is not None:
        parser.error("--seeds only applies when the random initializer is selected")
    else:
        seeds = []
    if args.max_iter < 1:
        parser.error("--max-iter must be >= 1")
    spec = ExperimentSpec(
        datasets=args.dataset, inits=inits, ks=args.k, normalization=args.normalize,
        lloyd=LloydConfig(args.max_iter, args.empty_cluster), seeds=seeds,
        space=args.space, data_dir=args.data_dir,
    )
    report = run_experiment(spec)
    by_error = {}
    for f in report.failed:
        by_error.setdefault((f.dataset, f.error), []).append(f)
    for (dataset, error), cells in by_error.items():
        print(f"FAILED {len(cells)} cell(s) on {dataset}: {error}", file=sys.stderr)
    out = Path(args.out) if args.out else _default_out(args.format)
    if report.cells:
        emit_report(report, args.format, out, metric=args.metric)
        print(f"wrote {len(report.cells)} cell(s) to {out}")
    return 1 if report.failed else 0


def cmd_datasets(args):
    print(f"{'name':<15}{'title':<16}{'attributes':>11}{'records':>9}  file")
    for d in REGISTRY.values():
        print(f"{d.name:<15}{d.title:<16}{d.n_attributes:>11}{d.n_records:>9}  {d.filename}")
    return 0


def cmd_verify(args):
    from .verify import run_all

    results = run_all(seed=args.seed, scale=args.scale)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return 0 if all(r.passed for r in results) else 1


def cmd_compare(args):
    import json

    report = ExperimentReport.from_dict(json.loads(Path(args.report).read_text(encoding="utf-8")))
    space = "raw_space" if args.space == "raw" else None
    for r in compare_methods(report, metric=args.metric, space=space,
                             allow_mixed_spaces=args.allow_mixed_spaces):
        print(f"{r.dataset} k={r.k}")
        for rank, e in enumerate(r.entries, start=1):
            extra = f"  (mean {e.mean:.6g}, sd {e.spread:.3g} over {e.runs} seeds)" if e.runs > 1 else ""
            print(f"  {rank}. {e.init:<9} {e.value:.6g} [{e.space}]{extra}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args, parser)
        if args.command == "datasets":
            return cmd_datasets(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_compare(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
