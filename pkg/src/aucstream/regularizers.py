"""Penalty terms with value, subgradient, exact proximal map and the
constants consumed by step-size theory.

Convention: the squared-norm penalty is lam * ||w||_2^2 with no 1/2 factor,
so its self-bounding constant is a1 = 4*lam and its strong-convexity modulus
is sigma_omega = 2*lam. The halved form lam*||w||^2/2 is representable as
l2(lam/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_KINDS = ("none", "l2", "l1")


@dataclass(frozen=True)
class Regularizer:
    """Penalty descriptor: one of none, l2(lam) = lam*||w||_2^2,
    l1(lam) = lam*||w||_1."""

    kind: str
    lam: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown regularizer kind {self.kind!r}")
        if self.kind != "none" and self.lam <= 0:
            raise ValueError(f"{self.kind} regularizer needs lam > 0, got {self.lam}")

    @property
    def a1(self) -> float:
        """Self-bounding constant: ||subgrad(w)||^2 <= a1 * value(w) + a2."""
        return 4.0 * self.lam if self.kind == "l2" else 0.0

    @property
    def a2(self) -> float:
        """Per-coordinate offset: for l1 the subgradient satisfies
        ||subgrad(w)||^2 <= a2 * nnz(w) <= a2 * d."""
        return self.lam**2 if self.kind == "l1" else 0.0

    @property
    def sigma_omega(self) -> float:
        """Strong-convexity modulus (0 for none and l1)."""
        return 2.0 * self.lam if self.kind == "l2" else 0.0

    def value(self, w: np.ndarray) -> float:
        if self.kind == "none":
            return 0.0
        if self.kind == "l2":
            return self.lam * float(w @ w)
        return self.lam * float(np.sum(np.abs(w)))

    def subgrad(self, w: np.ndarray) -> np.ndarray:
        if self.kind == "none":
            return np.zeros_like(w)
        if self.kind == "l2":
            return 2.0 * self.lam * w
        # sign(0) = 0: a valid subgradient choice, kept for determinism
        return self.lam * np.sign(w)

    def prox(self, v: np.ndarray, eta: float) -> np.ndarray:
        """argmin_w eta*value(w) + 0.5*||w - v||^2, in closed form."""
        if eta <= 0:
            raise ValueError(f"prox step must be positive, got {eta}")
        if self.kind == "none":
            return v.copy()
        if self.kind == "l2":
            return v / (1.0 + 2.0 * eta * self.lam)
        thresh = eta * self.lam
        return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


def none_reg() -> Regularizer:
    return Regularizer("none")


def l2(lam: float) -> Regularizer:
    return Regularizer("l2", lam)


def l1(lam: float) -> Regularizer:
    return Regularizer("l1", lam)
