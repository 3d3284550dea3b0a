"""Command line front end: fit, sweep, plotdata, rankfirst."""

import argparse
import csv
import json
import sys
from pathlib import Path

from .bench import (
    DEFAULT_ALGORITHMS,
    DEFAULT_LAMBDAS,
    DEFAULT_RANKS,
    ExperimentPlan,
    load_plan,
    plot_data,
    rank_first,
    run_fit,
    run_sweep,
)
from .datasets import load_csv, load_manifest
from .solvers import ALGORITHMS, DSP_RULES, SolverConfig


def _load_data_arg(path, label_column, samples_as_cols):
    path = Path(path)
    if path.suffix == ".json":
        return load_manifest(path)
    if label_column is not None and label_column.isdigit():
        label_column = int(label_column)
    return load_csv(
        path,
        label_column=label_column,
        orientation="samples_as_cols" if samples_as_cols else "samples_as_rows",
    )


def _add_solver_flags(parser):
    parser.add_argument("--algorithm", choices=ALGORITHMS, default="dsp_nmf")
    parser.add_argument("--rank", type=int, default=2)
    parser.add_argument("--lam", type=float, default=1e3,
                        help="structure penalty weight")
    parser.add_argument("--gnmf-lambda", type=float, default=100.0)
    parser.add_argument("--graph-k", type=int, default=5)
    parser.add_argument("--max-iter", type=int, default=200)
    parser.add_argument("--rel-tol", type=float, default=1e-5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dsp-rule", choices=DSP_RULES,
                        default="appendix_consistent")


def _write_tidy(rows, fieldnames, out):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out:
            fh.close()


def _cmd_fit(args):
    dataset = _load_data_arg(args.data, args.label_column, args.samples_as_cols)
    config = SolverConfig(
        algorithm=args.algorithm,
        rank=args.rank,
        lam=args.lam,
        gnmf_lambda=args.gnmf_lambda,
        graph_k=args.graph_k,
        max_iter=args.max_iter,
        rel_tol=args.rel_tol,
        seed=args.seed,
        dsp_rule=args.dsp_rule,
    )
    meta = run_fit(dataset, config, args.out)
    print(json.dumps(meta, indent=2))
    return 0


def _cmd_sweep(args):
    if args.config:
        plan = load_plan(args.config)
        if args.out:
            plan.output_dir = args.out
    else:
        if not args.data:
            raise ValueError("sweep needs --config or at least one --data")
        if not args.out:
            raise ValueError("sweep needs --out when built from flags")
        plan = ExperimentPlan(
            datasets=args.data,
            output_dir=args.out,
            algorithms=args.algorithms,
            ranks=args.ranks,
            lambdas=args.lambdas,
            runs=args.runs,
            folds=args.folds,
            base_seed=args.base_seed,
            max_iter=args.max_iter,
            rel_tol=args.rel_tol,
            gnmf_lambda=args.gnmf_lambda,
            graph_k=args.graph_k,
            dsp_rule=args.dsp_rule,
            knn_k=args.knn_k,
            test_reduction=args.test_reduction,
        )
    _, _, n_errors = run_sweep(plan, jobs=args.jobs)
    if n_errors:
        print("sweep finished with %d failed cells" % n_errors, file=sys.stderr)
        return 2
    return 0


def _cmd_plotdata(args):
    rows = plot_data(
        args.results,
        args.kind,
        metric=args.metric,
        lam=args.lam,
        rank=args.rank,
        dataset=args.dataset,
    )
    _write_tidy(rows, ["x", "y", "series"], args.out)
    return 0


def _cmd_rankfirst(args):
    rows = rank_first(args.summary)
    _write_tidy(rows, ["metric", "statistic", "algorithm", "firsts"], args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="structnmf",
        description="Factorization benchmarks with structure-preserving NMF.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit one configuration, write factors + trace")
    p_fit.add_argument("--data", required=True,
                       help="dataset manifest (.json) or CSV file")
    p_fit.add_argument("--label-column", default=None)
    p_fit.add_argument("--samples-as-cols", action="store_true")
    p_fit.add_argument("--out", required=True, help="output directory")
    _add_solver_flags(p_fit)
    p_fit.set_defaults(func=_cmd_fit)

    p_sweep = sub.add_parser("sweep", help="run a rank/lambda/run grid")
    p_sweep.add_argument("--config", default=None, help="plan JSON file")
    p_sweep.add_argument("--data", action="append", default=None,
                         help="dataset manifest; repeatable")
    p_sweep.add_argument("--out", default=None, help="output directory")
    p_sweep.add_argument("--algorithms", nargs="+", default=list(DEFAULT_ALGORITHMS),
                         choices=ALGORITHMS)
    p_sweep.add_argument("--ranks", nargs="+", type=int, default=list(DEFAULT_RANKS))
    p_sweep.add_argument("--lambdas", nargs="+", type=float,
                         default=list(DEFAULT_LAMBDAS))
    p_sweep.add_argument("--runs", type=int, default=5)
    p_sweep.add_argument("--folds", type=int, default=5)
    p_sweep.add_argument("--base-seed", type=int, default=0)
    p_sweep.add_argument("--max-iter", type=int, default=200)
    p_sweep.add_argument("--rel-tol", type=float, default=1e-5)
    p_sweep.add_argument("--gnmf-lambda", type=float, default=100.0)
    p_sweep.add_argument("--graph-k", type=int, default=5)
    p_sweep.add_argument("--dsp-rule", choices=DSP_RULES,
                         default="appendix_consistent")
    p_sweep.add_argument("--knn-k", type=int, default=3)
    p_sweep.add_argument("--test-reduction", choices=["joint", "fixed_w"],
                         default="joint")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_plot = sub.add_parser("plotdata", help="reduce results to x,y,series rows")
    p_plot.add_argument("--results", required=True,
                        help="results.csv from sweep, or trace.csv for convergence")
    p_plot.add_argument("--kind", required=True,
                        choices=["performance_vs_rank", "lambda_trend", "convergence"])
    p_plot.add_argument("--metric", default="nmi", choices=["nmi", "accuracy"])
    p_plot.add_argument("--lam", type=float, default=None)
    p_plot.add_argument("--rank", type=int, default=None)
    p_plot.add_argument("--dataset", default=None)
    p_plot.add_argument("--out", default=None, help="output CSV (default stdout)")
    p_plot.set_defaults(func=_cmd_plotdata)

    p_rank = sub.add_parser("rankfirst", help="count datasets each algorithm wins")
    p_rank.add_argument("--summary", required=True, help="summary.csv from sweep")
    p_rank.add_argument("--out", default=None, help="output CSV (default stdout)")
    p_rank.set_defaults(func=_cmd_rankfirst)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - single exit path for the CLI
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
