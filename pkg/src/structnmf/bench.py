"""Benchmark harness: multi-run sweeps over algorithms, ranks and lambdas.

The CLI in cli.py is a thin argument layer over the functions here, so tests
can drive everything in-process. All CSV output uses repr() floats, which
round-trip bit-exactly and make reruns byte-identical.
"""

import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import load_csv, load_manifest, minmax_normalize
from .evaluation import kfold_cv, kmeans, nmi, run_stats
from .linalg import mul_update_step
from .solvers import SolverConfig, diag_deviation, fit

RESULTS_FIELDS = ["dataset", "algorithm", "rank", "lambda", "run", "metric", "value"]
SUMMARY_FIELDS = ["dataset", "algorithm", "rank", "lambda", "metric", "mean", "max"]
DEFAULT_RANKS = [2, 3, 5, 7, 9, 11, 15, 20]
DEFAULT_LAMBDAS = [1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8]
DEFAULT_ALGORITHMS = ["basic_nmf", "gnmf", "symm_nmf", "dsp_nmf"]


@dataclass
class ExperimentPlan:
    """A full sweep: datasets crossed with algorithms, ranks, lambdas, runs."""

    datasets: list
    output_dir: str
    algorithms: list = field(default_factory=lambda: list(DEFAULT_ALGORITHMS))
    ranks: list = field(default_factory=lambda: list(DEFAULT_RANKS))
    lambdas: list = field(default_factory=lambda: list(DEFAULT_LAMBDAS))
    runs: int = 5
    folds: int = 5
    base_seed: int = 0
    max_iter: int = 200
    rel_tol: float = 1e-5
    gnmf_lambda: float = 100.0
    graph_k: int = 5
    dsp_rule: str = "appendix_consistent"
    knn_k: int = 3
    test_reduction: str = "joint"  # or "fixed_w": refit H for held-out columns

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.datasets:
            raise ValueError("plan needs at least one dataset")
        if self.test_reduction not in ("joint", "fixed_w"):
            raise ValueError("unknown test_reduction %r" % (self.test_reduction,))


def load_plan(path):
    """Read an ExperimentPlan from JSON; dataset manifest paths resolve
    relative to the plan file."""
    path = Path(path)
    with open(path) as fh:
        raw = json.load(fh)
    datasets = []
    for ref in raw.pop("datasets"):
        ref = Path(ref)
        datasets.append(str(ref if ref.is_absolute() else path.parent / ref))
    raw.setdefault("output_dir", str(path.parent / "sweep_out"))
    return ExperimentPlan(datasets=datasets, **raw)


def _load_dataset_ref(ref):
    ref = Path(ref)
    if ref.suffix == ".json":
        return load_manifest(ref)
    return load_csv(ref, label_column="label")


def _write_matrix_csv(path, matrix):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(matrix):
            writer.writerow([repr(float(v)) for v in row])


def _write_rows(path, fieldnames, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _fmt(v):
    return repr(float(v))


def run_fit(dataset, config, out_dir):
    """Fit one configuration and write W.csv, H.csv, trace.csv and fit.json.

    Returns the fit metadata dict (converged flag, iteration count, basis
    diagnostics). The data matrix is min-max normalized before fitting.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    x = minmax_normalize(dataset.X)
    pair, trace = fit(x, config)
    if pair.W is not None:
        _write_matrix_csv(out_dir / "W.csv", pair.W)
    _write_matrix_csv(out_dir / "H.csv", pair.H)
    with open(out_dir / "trace.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "objective"])
        for i, f in enumerate(trace.objective_history):
            writer.writerow([i, _fmt(f)])
    meta = {
        "dataset": dataset.name,
        "algorithm": config.algorithm,
        "rank": config.rank,
        "lambda": config.lam,
        "seed": config.seed,
        "converged": trace.converged,
        "iterations_run": trace.iterations_run,
        "final_objective": float(trace.objective_history[-1]),
        "wall_time": trace.wall_time,
    }
    if pair.W is not None:
        lam_hat, deviation = diag_deviation(pair.W)
        meta["lambda_hat"] = lam_hat
        meta["diag_deviation"] = deviation
    with open(out_dir / "fit.json", "w") as fh:
        json.dump(meta, fh, indent=2)
    return meta


def _reduce_fixed_w(x_test, w, seed, iters=100):
    """Coefficients for held-out columns with the basis frozen."""
    rng = np.random.default_rng(seed)
    h = 1.0 - rng.uniform(0.0, 0.99, size=(w.shape[1], x_test.shape[1]))
    wtw = w.T @ w
    wtx = w.T @ x_test
    for _ in range(iters):
        h = mul_update_step(h, wtx, wtw @ h)
    return h


def _cv_fixed_w(x, labels, w, folds, seed, knn_k):
    """kfold accuracy where each fold's H comes from a fixed-W reduction."""
    from .evaluation import _stratified_folds, accuracy, knn_classify

    n = labels.size
    assignment = (
        np.arange(n)
        if folds == n
        else _stratified_folds(labels, folds, np.random.default_rng(seed))
    )
    scores = []
    for f in range(folds):
        test = assignment == f
        h_train = _reduce_fixed_w(x[:, ~test], w, seed)
        h_test = _reduce_fixed_w(x[:, test], w, seed + 1)
        pred = knn_classify(h_train, labels[~test], h_test, knn_k)
        scores.append(accuracy(pred, labels[test]))
    return scores


def _run_cell(cell):
    """One (dataset, algorithm, rank, lambda, run) evaluation.

    Returns a list of long-format result rows. Never raises: failures come
    back as metric="error" rows so one bad cell cannot kill a sweep.
    """
    (name, x, labels, algorithm, rank, lam, run_idx, plan_kw) = cell
    base = {
        "dataset": name,
        "algorithm": algorithm,
        "rank": rank,
        "lambda": _fmt(lam),
        "run": run_idx,
    }
    try:
        seed = plan_kw["base_seed"] + run_idx
        config = SolverConfig(
            algorithm=algorithm,
            rank=rank,
            lam=lam,
            gnmf_lambda=plan_kw["gnmf_lambda"],
            graph_k=plan_kw["graph_k"],
            max_iter=plan_kw["max_iter"],
            rel_tol=plan_kw["rel_tol"],
            seed=seed,
            dsp_rule=plan_kw["dsp_rule"],
        )
        pair, _ = fit(x, config)
        k = int(labels.max()) + 1
        cluster_labels = kmeans(pair.H, k, seed=seed)
        nmi_val = nmi(cluster_labels, labels)
        if plan_kw["test_reduction"] == "fixed_w" and pair.W is not None:
            fold_scores = _cv_fixed_w(
                x, labels, pair.W, plan_kw["folds"], seed, plan_kw["knn_k"]
            )
        else:
            fold_scores = kfold_cv(
                pair.H, labels, plan_kw["folds"], seed=seed, knn_k=plan_kw["knn_k"]
            )
        acc_val = float(np.mean(fold_scores))
        return [
            dict(base, metric="nmi", value=_fmt(nmi_val)),
            dict(base, metric="accuracy", value=_fmt(acc_val)),
        ]
    except Exception as exc:  # noqa: BLE001 - cell isolation is the contract
        return [dict(base, metric="error", value=str(exc))]


def run_sweep(plan, jobs=1):
    """Execute a full plan; returns (results_rows, summary_rows, n_errors).

    Writes results.csv, summary.csv and sweep_meta.json into
    plan.output_dir. Cells are independent; seeds are position-derived
    (base_seed + run index), so parallel execution cannot change values.
    """
    started = time.time()
    out_dir = Path(plan.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    plan_kw = {
        "base_seed": plan.base_seed,
        "max_iter": plan.max_iter,
        "rel_tol": plan.rel_tol,
        "gnmf_lambda": plan.gnmf_lambda,
        "graph_k": plan.graph_k,
        "dsp_rule": plan.dsp_rule,
        "folds": plan.folds,
        "knn_k": plan.knn_k,
        "test_reduction": plan.test_reduction,
    }

    cells = []
    for ref in plan.datasets:
        ds = _load_dataset_ref(ref)
        if ds.labels is None:
            raise ValueError("dataset %s has no labels; sweeps need them" % ds.name)
        x = minmax_normalize(ds.X)
        limit = min(x.shape)
        for rank in plan.ranks:
            if not 1 <= rank < limit:
                print(
                    "warning: skipping rank %d for %s (needs 1 <= rank < %d)"
                    % (rank, ds.name, limit),
                    file=sys.stderr,
                )
                continue
            for algorithm in plan.algorithms:
                for lam in plan.lambdas:
                    for run_idx in range(plan.runs):
                        cells.append(
                            (ds.name, x, ds.labels, algorithm, rank, lam, run_idx, plan_kw)
                        )

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_cell = list(pool.map(_run_cell, cells, chunksize=4))
    else:
        per_cell = [_run_cell(c) for c in cells]

    results = [row for rows in per_cell for row in rows]
    n_errors = sum(1 for row in results if row["metric"] == "error")

    groups = {}
    for row in results:
        if row["metric"] == "error":
            continue
        key = (row["dataset"], row["algorithm"], row["rank"], row["lambda"], row["metric"])
        groups.setdefault(key, []).append(float(row["value"]))
    summary = []
    for key in sorted(groups, key=lambda k: (k[0], k[1], k[2], float(k[3]), k[4])):
        mean, best = run_stats(groups[key])
        dataset, algorithm, rank, lam, metric = key
        summary.append(
            {
                "dataset": dataset,
                "algorithm": algorithm,
                "rank": rank,
                "lambda": lam,
                "metric": metric,
                "mean": _fmt(mean),
                "max": _fmt(best),
            }
        )

    _write_rows(out_dir / "results.csv", RESULTS_FIELDS, results)
    _write_rows(out_dir / "summary.csv", SUMMARY_FIELDS, summary)
    meta = {
        "plan": asdict(plan),
        "tool_version": __version__,
        "wall_time": time.time() - started,
        "cells_total": len(cells),
        "cells_failed": n_errors,
    }
    with open(out_dir / "sweep_meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
    return results, summary, n_errors


def _read_rows(path, required):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = [c for c in required if c not in fields]
        if missing:
            raise ValueError(
                "%s: missing columns %s (found %s)" % (path, missing, fields)
            )
        return list(reader)


def plot_data(path, kind, metric="nmi", lam=None, rank=None, dataset=None):
    """Reduce a results or trace CSV to tidy (x, y, series) rows.

    Kinds:
        performance_vs_rank: x=rank, y=metric mean over runs, one series per
            algorithm; requires a single lambda (pass lam= when the results
            hold several).
        lambda_trend: x=lambda, y=metric mean over runs and ranks, one
            series per algorithm.
        convergence: pass a trace.csv; rows pass through as x=iteration,
            y=objective.
    """
    if kind == "convergence":
        rows = _read_rows(path, ["iteration", "objective"])
        series = Path(path).stem
        return [
            {"x": row["iteration"], "y": row["objective"], "series": series}
            for row in rows
        ]

    rows = _read_rows(path, RESULTS_FIELDS)
    rows = [r for r in rows if r["metric"] == metric]
    if dataset is not None:
        rows = [r for r in rows if r["dataset"] == dataset]
    if rank is not None:
        rows = [r for r in rows if int(r["rank"]) == int(rank)]
    if not rows:
        raise ValueError("no %r rows to plot in %s" % (metric, path))
    datasets = sorted({r["dataset"] for r in rows})

    def series_name(ds_name, algorithm):
        return algorithm if len(datasets) == 1 else "%s:%s" % (ds_name, algorithm)

    if kind == "performance_vs_rank":
        lambdas = sorted({float(r["lambda"]) for r in rows})
        if lam is None:
            if len(lambdas) > 1:
                raise ValueError(
                    "results hold several lambdas %s; pass lam=" % (lambdas,)
                )
            lam = lambdas[0]
        rows = [r for r in rows if float(r["lambda"]) == float(lam)]
        groups = {}
        for r in rows:
            key = (series_name(r["dataset"], r["algorithm"]), int(r["rank"]))
            groups.setdefault(key, []).append(float(r["value"]))
        out = []
        for (series, x) in sorted(groups):
            out.append(
                {"x": x, "y": _fmt(np.mean(groups[(series, x)])), "series": series}
            )
        return out

    if kind == "lambda_trend":
        groups = {}
        for r in rows:
            key = (series_name(r["dataset"], r["algorithm"]), float(r["lambda"]))
            groups.setdefault(key, []).append(float(r["value"]))
        out = []
        for (series, x) in sorted(groups):
            out.append(
                {"x": _fmt(x), "y": _fmt(np.mean(groups[(series, x)])), "series": series}
            )
        return out

    raise ValueError("unknown plot kind %r" % (kind,))


def rank_first(path):
    """Count, per metric and statistic, the datasets each algorithm wins.

    An algorithm's dataset-level score pools its summary rows: the mean
    statistic averages the per-group means over ranks/lambdas, the max
    statistic takes the best group max. Ties hand a first to every tied
    algorithm. Returns rows {metric, statistic, algorithm, firsts}.
    """
    rows = _read_rows(path, SUMMARY_FIELDS)
    metrics = sorted({r["metric"] for r in rows})
    algorithms = sorted({r["algorithm"] for r in rows})
    out = []
    for metric in metrics:
        sub = [r for r in rows if r["metric"] == metric]
        datasets = sorted({r["dataset"] for r in sub})
        for stat in ("mean", "max"):
            firsts = {a: 0 for a in algorithms}
            for ds_name in datasets:
                scores = {}
                for a in algorithms:
                    vals = [
                        float(r[stat])
                        for r in sub
                        if r["dataset"] == ds_name and r["algorithm"] == a
                    ]
                    if vals:
                        scores[a] = np.mean(vals) if stat == "mean" else max(vals)
                if not scores:
                    continue
                best = max(scores.values())
                for a, v in scores.items():
                    if v == best:
                        firsts[a] += 1
            for a in algorithms:
                out.append(
                    {"metric": metric, "statistic": stat, "algorithm": a, "firsts": firsts[a]}
                )
    return out
