"""Benchmark and tuning harness: multi-algorithm AUC-versus-time runs with
repeats, CSV traces, aggregate reports, and cross-validated random grid
search over step-size and penalty parameters.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import ALGORITHMS, run_baseline, unknown_algorithm_message
from .data import Dataset, split
from .regularizers import Regularizer, l1, l2, none_reg
from .schedules import PracticalSchedule
from .trainer import DivergenceError, TracePoint, TrainConfig, train

TRACE_HEADER = ["iter", "elapsed_sec", "test_auc", "objective"]
REPORT_HEADER = ["algo", "dataset", "auc_mean", "auc_std",
                 "time_per_pass_mean", "time_per_pass_std"]

# tuning intervals: mu over 10^{-7..-2.5} (half-decade steps), the penalty
# weight over 10^{-5..0}, the l2-ball radius over 10^{-1..5}
DEFAULT_MU_GRID = [float(10.0**e) for e in np.arange(-7.0, -2.25, 0.5)]
DEFAULT_LAMBDA_GRID = [10.0**e for e in range(-5, 1)]
DEFAULT_RADIUS_GRID = [10.0**e for e in range(-1, 6)]

OBJECTIVE_SUBSAMPLE_CAP = 5000


def write_trace(path, trace: list[TracePoint]) -> None:
    """Trace CSV: one row per evaluation point, full float precision."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for pt in trace:
            writer.writerow([
                pt.step,
                repr(pt.elapsed_sec),
                "" if pt.test_auc is None else repr(pt.test_auc),
                "" if pt.objective is None else repr(pt.objective),
            ])


def read_trace(path) -> list[TracePoint]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != TRACE_HEADER:
            raise ValueError(f"unexpected trace header {header!r}")
        out = []
        for row in reader:
            out.append(TracePoint(
                step=int(row[0]),
                elapsed_sec=float(row[1]),
                test_auc=float(row[2]) if row[2] else None,
                objective=float(row[3]) if row[3] else None,
            ))
        return out


def objective_subsample(dataset: Dataset, seed: int,
                        cap: int = OBJECTIVE_SUBSAMPLE_CAP) -> Dataset:
    """Deterministic subsample used for objective traces, keeping evaluation
    O(cap * nnz) on large data."""
    if len(dataset) <= cap:
        return dataset
    idx = np.sort(np.random.default_rng([seed, 104729]).choice(
        len(dataset), size=cap, replace=False))
    return dataset.subset(idx)


def config_from_params(params: dict, reg_kind: str, epochs: int, seed: int,
                       eval_every: int, average: str = "last") -> TrainConfig:
    """Build a training configuration from a tuning point: `mu` drives the
    practical schedule, `lambda` the penalty weight when one is in play."""
    schedule = PracticalSchedule(mu=params["mu"])
    if reg_kind == "none":
        reg = none_reg()
    elif reg_kind == "l2":
        reg = l2(params["lambda"])
    elif reg_kind == "l1":
        reg = l1(params["lambda"])
    else:
        raise ValueError(f"unknown regularizer kind {reg_kind!r}")
    return TrainConfig(regularizer=reg, schedule=schedule, epochs=epochs,
                       seed=seed, average=average, eval_every=eval_every)


def run_algorithm(algo: str, train_data: Dataset, config: TrainConfig,
                  radius: float = 100.0,
                  test_data: Dataset | None = None,
                  objective_data: Dataset | None = None):
    """Dispatch one training run; identical trace schema for every algorithm."""
    if algo == "spauc":
        return train(train_data, config, test_data, objective_data)
    if algo in ("spam", "solam"):
        return run_baseline(algo, train_data, config, radius=radius,
                            test_data=test_data, objective_data=objective_data)
    raise ValueError(unknown_algorithm_message(algo))


@dataclass(frozen=True)
class TuneGrid:
    """Random grid search plan: ordered candidate lists per parameter, how
    many grid points to sample, and the fold count."""

    params: dict[str, list[float]]
    pair_sample_size: int = 15
    folds: int = 5

    def __post_init__(self):
        if not self.params or any(len(v) == 0 for v in self.params.values()):
            raise ValueError("every tuned parameter needs a non-empty candidate list")
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        if self.pair_sample_size < 1 or self.pair_sample_size > self.size:
            raise ValueError(
                f"pair_sample_size must be in [1, {self.size}], got {self.pair_sample_size}")

    @property
    def size(self) -> int:
        return math.prod(len(v) for v in self.params.values())

    def points(self) -> list[dict[str, float]]:
        keys = list(self.params)
        return [dict(zip(keys, combo))
                for combo in itertools.product(*(self.params[k] for k in keys))]

    def sample(self, seed: int) -> list[dict[str, float]]:
        """pair_sample_size grid points drawn without replacement."""
        points = self.points()
        rng = np.random.default_rng([seed, 15485863])
        chosen = rng.choice(len(points), size=self.pair_sample_size, replace=False)
        return [points[i] for i in chosen]


def _fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    perm = np.random.default_rng([seed, 2971]).permutation(n)
    return [perm[k::folds] for k in range(folds)]


def cross_validate(dataset: Dataset, algo: str, params: dict, reg_kind: str,
                   folds: int, seed: int, epochs: int,
                   radius: float = 100.0) -> list[float]:
    """Per-fold validation AUC of the last iterate; a diverged or degenerate
    fold scores 0 so it can never win."""
    from .metrics import auc

    fold_idx = _fold_indices(len(dataset), folds, seed)
    all_idx = np.arange(len(dataset))
    scores = []
    for k in range(folds):
        val = dataset.subset(fold_idx[k])
        fit = dataset.subset(np.setdiff1d(all_idx, fold_idx[k]))
        config = config_from_params(params, reg_kind, epochs, seed,
                                    eval_every=max(1, len(fit) * epochs))
        try:
            # oversized candidate steps are expected to blow up; keep the
            # overflow quiet and let the divergence guard score them
            with np.errstate(over="ignore", invalid="ignore"):
                w, _ = run_algorithm(algo, fit, config,
                                     radius=params.get("radius", radius))
            scores.append(auc(val.scores(w), val.labels))
        except (DivergenceError, ValueError):
            scores.append(0.0)
    return scores


def tune(dataset: Dataset, algo: str, grid: TuneGrid, reg_kind: str,
         seed: int, epochs: int, radius: float = 100.0):
    """Random grid search by K-fold cross-validation.

    Returns (best_params, table) where table rows carry the candidate, its
    per-fold AUCs and the mean; ties resolve to the first-sampled candidate.
    """
    best = None
    best_mean = -np.inf
    table = []
    for params in grid.sample(seed):
        fold_scores = cross_validate(dataset, algo, params, reg_kind,
                                     grid.folds, seed, epochs, radius)
        mean = float(np.mean(fold_scores))
        table.append({"params": params, "fold_aucs": fold_scores, "mean_auc": mean})
        if mean > best_mean:
            best, best_mean = params, mean
    return best, table


def write_tune_table(path, table) -> None:
    if not table:
        raise ValueError("empty tuning table")
    param_names = list(table[0]["params"])
    n_folds = len(table[0]["fold_aucs"])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(param_names + [f"fold_{k}" for k in range(n_folds)] + ["mean_auc"])
        for row in table:
            writer.writerow([repr(row["params"][p]) for p in param_names]
                            + [repr(s) for s in row["fold_aucs"]]
                            + [repr(row["mean_auc"])])


@dataclass
class ReportRow:
    algo: str
    dataset: str
    auc_mean: float
    auc_std: float
    time_per_pass_mean: float
    time_per_pass_std: float


def _sample_std(values: list[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def aggregate(algo: str, dataset_name: str, traces: list[list[TracePoint]],
              epochs: int) -> ReportRow:
    """Mean and sample standard deviation of the final test AUC and of the
    per-pass training time, straight from the traces."""
    finals = [trace[-1] for trace in traces]
    aucs = [pt.test_auc for pt in finals]
    if any(a is None for a in aucs):
        raise ValueError("benchmark traces must carry test AUC")
    times = [pt.elapsed_sec / epochs for pt in finals]
    return ReportRow(algo, dataset_name,
                     float(np.mean(aucs)), _sample_std(aucs),
                     float(np.mean(times)), _sample_std(times))


def write_report(path, rows: list[ReportRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_HEADER)
        for r in rows:
            writer.writerow([r.algo, r.dataset, repr(r.auc_mean), repr(r.auc_std),
                             repr(r.time_per_pass_mean), repr(r.time_per_pass_std)])


def benchmark(dataset: Dataset, dataset_name: str, algos: list[str],
              repeats: int, base_seed: int, epochs: int, reg_kind: str,
              fixed_params: dict | None = None,
              tune_grid: TuneGrid | None = None,
              test_fraction: float = 0.2,
              eval_every: int = 1000,
              radius: float = 100.0,
              outdir=None,
              jobs: int = 1):
    """The measurement protocol: per repeat, a fresh seeded split, optionally
    a cross-validated parameter search on the training part, then one traced
    run per algorithm.

    Returns (report_rows, trace_map) with trace_map[(algo, repeat)] the run's
    trace. Per-run trace CSVs and the aggregate report are written under
    `outdir` when given. Repeats run concurrently when jobs > 1; traces still
    time honestly only in serial mode.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    for algo in algos:
        if algo not in ALGORITHMS:
            raise ValueError(unknown_algorithm_message(algo))

    def one_repeat(r: int):
        seed = base_seed + r
        fit, held_out = split(dataset, test_fraction, seed)
        obj_data = objective_subsample(fit, seed)
        if tune_grid is not None:
            params_by_algo = {a: tune(fit, a, tune_grid, reg_kind, seed, epochs)[0]
                              for a in algos}
        else:
            params_by_algo = {a: dict(fixed_params or {"mu": 0.01}) for a in algos}
        results = {}
        for algo in algos:
            params = params_by_algo[algo]
            config = config_from_params(params, reg_kind, epochs, seed, eval_every)
            results[algo] = run_algorithm(algo, fit, config,
                                          radius=params.get("radius", radius),
                                          test_data=held_out,
                                          objective_data=obj_data)[1]
        return results

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_repeat = list(pool.map(one_repeat, range(repeats)))
    else:
        per_repeat = [one_repeat(r) for r in range(repeats)]

    trace_map = {(algo, r): per_repeat[r][algo]
                 for r in range(repeats) for algo in algos}
    if outdir is not None:
        for (algo, r), trace in trace_map.items():
            write_trace(f"{outdir}/{algo}_rep{r}.csv", trace)
    rows = [aggregate(algo, dataset_name,
                      [trace_map[(algo, r)] for r in range(repeats)], epochs)
            for algo in algos]
    if outdir is not None:
        write_report(f"{outdir}/report.csv", rows)
    return rows, trace_map
