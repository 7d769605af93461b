"""Streaming proximal training loop for the pairwise AUC surrogate.

Each arriving example is scored against statistics built from strictly
earlier examples only: the gradient step happens first, the example is
absorbed into the running statistics afterwards. Until one example of each
class has been seen, examples only feed the statistics (warm-up) and no
proximal step is taken.

Two weighted running averages of the iterates are maintained alongside the
last iterate: one weighted by the step sizes, one by k + t1 + 1 at step k
(the weighting under which the fast-rate schedule has its guarantee).
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass

import numpy as np

from .data import Dataset, Example, stream_order
from .metrics import auc
from .objective import pairwise_objective_fast, surrogate_grad
from .regularizers import Regularizer
from .schedules import (FastRateSchedule, LogDampedSchedule, PolySchedule,
                        PracticalSchedule, Schedule)
from .stats import ClassStats

AVERAGES = ("last", "avg1", "avg2")


class DivergenceError(RuntimeError):
    """Training produced a non-finite iterate. Carries the step index and the
    last finite weight vector."""

    def __init__(self, iteration: int, last_weight: np.ndarray):
        super().__init__(f"training diverged at iteration {iteration}")
        self.iteration = iteration
        self.last_weight = last_weight


@dataclass(frozen=True)
class TrainConfig:
    regularizer: Regularizer
    schedule: Schedule
    epochs: int = 1
    seed: int = 0
    average: str = "last"
    eval_every: int = 1000
    t1: float | None = None  # averaging offset; defaults to the schedule's

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.eval_every < 1:
            raise ValueError(f"eval_every must be >= 1, got {self.eval_every}")
        if self.average not in AVERAGES:
            raise ValueError(f"average must be one of {AVERAGES}, got {self.average!r}")

    def resolved_t1(self) -> float:
        if self.t1 is not None:
            return self.t1
        if isinstance(self.schedule, FastRateSchedule):
            return self.schedule.t1
        return 0.0


@dataclass
class TracePoint:
    """One evaluation record: cumulative step index, training seconds so far
    (evaluation time excluded), and optional quality measures."""

    step: int
    elapsed_sec: float
    test_auc: float | None = None
    objective: float | None = None


class IterateAverages:
    """Incrementally maintained weighted averages of iterates: one weighted
    by step size, one by step + t1 + 1."""

    def __init__(self, dim: int, t1: float):
        self.t1 = t1
        self.avg1_num = np.zeros(dim)
        self.avg1_den = 0.0
        self.avg2_num = np.zeros(dim)
        self.avg2_den = 0.0

    def add(self, w: np.ndarray, eta: float, step: int) -> None:
        self.avg1_num += eta * w
        self.avg1_den += eta
        weight = step + self.t1 + 1.0
        self.avg2_num += weight * w
        self.avg2_den += weight

    def get(self, kind: str, fallback: np.ndarray) -> np.ndarray:
        if kind == "last" or self.avg1_den == 0.0:
            return fallback.copy()
        if kind == "avg1":
            return self.avg1_num / self.avg1_den
        if kind == "avg2":
            return self.avg2_num / self.avg2_den
        raise ValueError(f"unknown average {kind!r}")


class SpaucTrainer:
    """Stochastic proximal learner on the streaming surrogate.

    step() implements: eta = schedule(t+1); g = surrogate gradient at the
    current weights under the pre-example snapshot; w <- prox(w - eta*g, eta);
    update both running averages; absorb the example.
    """

    def __init__(self, dim: int, config: TrainConfig):
        self.config = config
        self.w = np.zeros(dim)
        self.t = 0
        self.stats = ClassStats(dim)
        self.averages = IterateAverages(dim, config.resolved_t1())

    def step(self, z: Example) -> None:
        if not self.stats.ready:
            self.stats.update(z)
            return
        eta = self.config.schedule.step_size(self.t + 1)
        g = surrogate_grad(self.w, z, self.stats.snapshot())
        w_new = self.config.regularizer.prox(self.w - eta * g, eta)
        if not np.isfinite(w_new).all():
            raise DivergenceError(self.t + 1, self.w)
        self.averages.add(w_new, eta, self.t + 1)
        self.stats.update(z)
        self.w = w_new
        self.t += 1

    def model(self, average: str | None = None) -> np.ndarray:
        """Selected iterate: the last one or a weighted running average."""
        return self.averages.get(average or self.config.average, self.w)


def stream_run(learner, dataset: Dataset, config: TrainConfig,
               test_data: Dataset | None = None,
               objective_data: Dataset | None = None,
               time_offset: float = 0.0) -> tuple[np.ndarray, list[TracePoint]]:
    """Drive a learner over epochs * n examples in shuffled stream order.

    The clock is paused while evaluating trace points, so elapsed_sec measures
    training work only (plus any preprocessing passed in as time_offset).
    A final trace point is always recorded.
    """
    trace: list[TracePoint] = []
    last_traced = -1

    def record(elapsed: float) -> None:
        nonlocal last_traced
        w = learner.model(config.average)
        point = TracePoint(learner.t, elapsed)
        if test_data is not None:
            point.test_auc = auc(test_data.scores(w), test_data.labels)
        if objective_data is not None:
            point.objective = pairwise_objective_fast(w, objective_data)
        trace.append(point)
        last_traced = learner.t

    elapsed = time_offset
    tick = time.perf_counter()
    for epoch in range(config.epochs):
        for i in stream_order(dataset, epoch, config.seed):
            learner.step(dataset[i])
            if learner.t > 0 and learner.t % config.eval_every == 0 \
                    and learner.t != last_traced:
                elapsed += time.perf_counter() - tick
                record(elapsed)
                tick = time.perf_counter()
    elapsed += time.perf_counter() - tick
    if learner.t != last_traced:
        record(elapsed)
    return learner.model(config.average), trace


def check_eval_dims(dim: int, test_data: Dataset | None,
                    objective_data: Dataset | None) -> None:
    for name, data in (("test", test_data), ("objective", objective_data)):
        if data is not None and data.dim > dim:
            raise ValueError(
                f"{name} data dimension {data.dim} exceeds training dimension {dim}")


def train(dataset: Dataset, config: TrainConfig,
          test_data: Dataset | None = None,
          objective_data: Dataset | None = None) -> tuple[np.ndarray, list[TracePoint]]:
    """Run the proximal learner over a dataset; returns the configured iterate
    and the evaluation trace. Deterministic given config.seed."""
    if dataset.n_pos < 1 or dataset.n_neg < 1:
        raise ValueError("training data must contain both classes")
    check_eval_dims(dataset.dim, test_data, objective_data)
    learner = SpaucTrainer(dataset.dim, config)
    return stream_run(learner, dataset, config, test_data, objective_data)


def describe_config(config: TrainConfig) -> dict:
    """JSON-friendly echo of a training configuration."""
    sched = config.schedule
    kind = {PolySchedule: "poly", LogDampedSchedule: "logdamped",
            FastRateSchedule: "fastrate", PracticalSchedule: "practical"}[type(sched)]
    return {
        "regularizer": dataclasses.asdict(config.regularizer),
        "schedule": {"kind": kind, **dataclasses.asdict(sched)},
        "epochs": config.epochs,
        "seed": config.seed,
        "average": config.average,
        "eval_every": config.eval_every,
        "t1": config.t1,
    }


MODEL_FORMAT_VERSION = 1


def save_model(path: str, w: np.ndarray, config_echo: dict | None = None) -> None:
    """Persist a weight vector as a versioned JSON document.

    Fields: format_version (int), d (int), weights (dense list of floats),
    config (free-form echo of the training configuration).
    """
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "d": int(len(w)),
        "weights": [float(x) for x in w],
        "config": config_echo or {},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path: str) -> tuple[np.ndarray, dict]:
    """Read a model document; returns (weights, config echo)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version!r}")
    w = np.asarray(doc["weights"], dtype=np.float64)
    if len(w) != doc.get("d"):
        raise ValueError("model document is inconsistent: d != len(weights)")
    return w, doc.get("config", {})
