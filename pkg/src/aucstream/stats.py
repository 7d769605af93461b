"""Running per-class statistics for the streaming surrogate: class prior and
conditional feature means over the prefix of absorbed examples.

Sums, not means, are stored; division happens at snapshot time so every
snapshot is exactly the statistic of the absorbed multiset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, Example


class NotReadyError(ValueError):
    """Raised when a computation needs both classes observed and they are not."""


@dataclass(frozen=True)
class StatsSnapshot:
    """Value-type view of class statistics: prior p and class means u, v.

    `ready` is True once at least one example of each class has been seen;
    until then u and/or v are zero placeholders and consumers must not use
    them.
    """

    p: float
    u: np.ndarray
    v: np.ndarray
    ready: bool


class ClassStats:
    """Single-writer accumulator of per-class counts and feature sums."""

    def __init__(self, dim: int):
        self.dim = dim
        self.t = 0
        self.n_pos = 0
        self.sum_pos = np.zeros(dim)
        self.sum_neg = np.zeros(dim)

    @property
    def n_neg(self) -> int:
        return self.t - self.n_pos

    def update(self, z: Example) -> None:
        """Absorb one example: O(nnz) accumulation into the matching class sum."""
        if z.label == 1:
            self.n_pos += 1
            z.add_into(self.sum_pos)
        else:
            z.add_into(self.sum_neg)
        self.t += 1

    @property
    def ready(self) -> bool:
        return self.n_pos >= 1 and self.n_neg >= 1

    def snapshot(self) -> StatsSnapshot:
        """Current (p, u, v); p is 0 for an empty prefix, u/v are zeros until
        their class has been observed."""
        p = self.n_pos / self.t if self.t else 0.0
        u = self.sum_pos / self.n_pos if self.n_pos else np.zeros(self.dim)
        v = self.sum_neg / self.n_neg if self.n_neg else np.zeros(self.dim)
        return StatsSnapshot(p, u, v, self.ready)


def exact_snapshot(dataset: Dataset) -> StatsSnapshot:
    """Full-data moments (p, u, v) over a dataset containing both classes."""
    if dataset.n_pos < 1 or dataset.n_neg < 1:
        raise NotReadyError(
            f"need at least one example of each class, got {dataset.n_pos} positive "
            f"and {dataset.n_neg} negative"
        )
    stats = ClassStats(dataset.dim)
    for z in dataset:
        stats.update(z)
    return stats.snapshot()
