"""Exact empirical AUC of real-valued scores against binary labels.

Ties count one half (the Mann-Whitney convention), so a constant scorer gets
0.5. The sort-based path is checked in the test suite against an explicit
pair-counting oracle.
"""

from __future__ import annotations

import numpy as np


def _validated(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be 1-d arrays of equal length")
    n_pos = int(np.sum(y == 1))
    if n_pos == 0 or n_pos == len(y):
        raise ValueError("AUC is undefined without both classes present")
    return s, y


def auc(scores, labels) -> float:
    """Probability a random positive outscores a random negative, ties at 0.5.

    Single sort with tie-group rank averaging: O(n log n).
    """
    s, y = _validated(scores, labels)
    n = len(s)
    order = np.argsort(s, kind="mergesort")
    sorted_s = s[order]
    # average 1-based ranks within each tie group
    group = np.concatenate(([0], np.cumsum(np.diff(sorted_s) != 0)))
    group_mean = (np.bincount(group, weights=np.arange(1.0, n + 1.0))
                  / np.bincount(group))
    ranks = np.empty(n)
    ranks[order] = group_mean[group]
    n_pos = int(np.sum(y == 1))
    n_neg = n - n_pos
    rank_sum = float(np.sum(ranks[y == 1]))
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def auc_bruteforce(scores, labels) -> float:
    """Pair-counting oracle: every (positive, negative) pair contributes 1,
    0.5 on a tie, or 0. O(n_pos * n_neg)."""
    s, y = _validated(scores, labels)
    pos = s[y == 1]
    neg = s[y != 1]
    wins = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float(wins + 0.5 * ties) / (len(pos) * len(neg))
