"""Sparse dataset handling: LIBSVM/SVMlight text parsing, label binarization,
train/test splitting and deterministic streaming order.

Feature indices are 1-based in files (LIBSVM convention) and 0-based
internally.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np


class ParseError(ValueError):
    """Malformed dataset text. Carries the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class BinarizeRule:
    """Maps raw integer labels to {+1, -1}.

    kinds:
      identity      labels are already in {+1, -1}
      zero_one      0 -> -1, 1 -> +1
      threshold(k)  label <= k -> +1, else -1
    """

    kind: str
    k: int = 0

    _KINDS = ("identity", "zero_one", "threshold")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown binarize rule {self.kind!r}")

    @classmethod
    def identity(cls) -> "BinarizeRule":
        return cls("identity")

    @classmethod
    def zero_one(cls) -> "BinarizeRule":
        return cls("zero_one")

    @classmethod
    def threshold(cls, k: int) -> "BinarizeRule":
        return cls("threshold", k=k)


def binarize(raw_label: float, rule: BinarizeRule) -> int:
    """Apply a binarization rule to a raw label; returns +1 or -1."""
    if rule.kind == "identity":
        if raw_label == 1:
            return 1
        if raw_label == -1:
            return -1
        raise ValueError(f"identity rule expects labels in {{+1,-1}}, got {raw_label}")
    if rule.kind == "zero_one":
        if raw_label == 1:
            return 1
        if raw_label == 0:
            return -1
        raise ValueError(f"zero_one rule expects labels in {{0,1}}, got {raw_label}")
    # threshold(k): first half of the label alphabet becomes positive
    return 1 if raw_label <= rule.k else -1


@dataclass(frozen=True)
class Example:
    """One labeled observation with sparse features.

    indices are 0-based, strictly increasing; values are finite floats;
    label is +1 or -1.
    """

    indices: np.ndarray
    values: np.ndarray
    label: int

    @classmethod
    def from_dense(cls, x: np.ndarray, label: int) -> "Example":
        x = np.asarray(x, dtype=np.float64)
        idx = np.flatnonzero(x)
        return cls(idx.astype(np.int64), x[idx].copy(), int(label))

    def dot(self, w: np.ndarray) -> float:
        """Inner product with a dense vector, O(nnz)."""
        if self.indices.size == 0:
            return 0.0
        return float(w[self.indices] @ self.values)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def add_into(self, out: np.ndarray, scale: float = 1.0) -> None:
        """out[indices] += scale * values (indices are unique by invariant)."""
        out[self.indices] += scale * self.values

    def to_dense(self, dim: int) -> np.ndarray:
        x = np.zeros(dim)
        x[self.indices] = self.values
        return x


@dataclass
class Dataset:
    """Immutable-after-construction collection of examples.

    dim is at least 1 + the largest feature index. Positive/negative index
    arrays and the flattened scoring layout are built lazily and cached.
    """

    examples: list[Example]
    dim: int
    n_pos: int
    n_neg: int
    _labels: np.ndarray | None = field(default=None, repr=False)
    _pos_idx: np.ndarray | None = field(default=None, repr=False)
    _neg_idx: np.ndarray | None = field(default=None, repr=False)
    _flat: tuple[np.ndarray, np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @classmethod
    def from_examples(cls, examples: list[Example], dim: int | None = None) -> "Dataset":
        max_idx = -1
        n_pos = 0
        for ex in examples:
            if ex.indices.size:
                max_idx = max(max_idx, int(ex.indices[-1]))
            if ex.label == 1:
                n_pos += 1
        min_dim = max_idx + 1
        if dim is None:
            dim = min_dim
        elif dim < min_dim:
            raise ValueError(f"dim {dim} smaller than 1 + max feature index {max_idx}")
        return cls(examples, dim, n_pos, len(examples) - n_pos)

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[Example]:
        return iter(self.examples)

    def __getitem__(self, i: int) -> Example:
        return self.examples[i]

    @property
    def labels(self) -> np.ndarray:
        if self._labels is None:
            self._labels = np.fromiter((ex.label for ex in self.examples),
                                       dtype=np.int64, count=len(self))
        return self._labels

    @property
    def pos_indices(self) -> np.ndarray:
        if self._pos_idx is None:
            labels = self.labels
            self._pos_idx = np.flatnonzero(labels == 1)
            self._neg_idx = np.flatnonzero(labels == -1)
        return self._pos_idx

    @property
    def neg_indices(self) -> np.ndarray:
        self.pos_indices
        return self._neg_idx

    def scores(self, w: np.ndarray) -> np.ndarray:
        """All inner products w.x_i in one vectorized pass."""
        if self._flat is None:
            rows = np.concatenate(
                [np.full(ex.indices.size, i, dtype=np.int64) for i, ex in enumerate(self.examples)]
            ) if self.examples else np.zeros(0, dtype=np.int64)
            cols = (np.concatenate([ex.indices for ex in self.examples])
                    if self.examples else np.zeros(0, dtype=np.int64))
            vals = (np.concatenate([ex.values for ex in self.examples])
                    if self.examples else np.zeros(0))
            self._flat = (rows, cols, vals)
        rows, cols, vals = self._flat
        return np.bincount(rows, weights=vals * w[cols], minlength=len(self))

    def subset(self, indices: np.ndarray) -> "Dataset":
        """New Dataset over examples[indices], keeping this dataset's dim."""
        sub = [self.examples[i] for i in indices]
        n_pos = sum(1 for ex in sub if ex.label == 1)
        return Dataset(sub, self.dim, n_pos, len(sub) - n_pos)


def parse_libsvm(lines: Iterable[str] | str, rule: BinarizeRule | None = None) -> Dataset:
    """Parse LIBSVM/SVMlight text into a Dataset.

    Each data line is ``label idx:val idx:val ...`` with 1-based, strictly
    increasing indices. Blank lines and ``#`` comments are tolerated. Labels
    are normalized to {+1, -1} through `rule` (identity by default).

    Raises ParseError with the offending line number on malformed input or
    when no examples are found.
    """
    if rule is None:
        rule = BinarizeRule.identity()
    if isinstance(lines, str):
        lines = io.StringIO(lines)
    examples: list[Example] = []
    for line_no, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            raw_label = float(tokens[0])
        except ValueError:
            raise ParseError(f"bad label token {tokens[0]!r}", line_no) from None
        try:
            label = binarize(raw_label, rule)
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from None
        indices = np.empty(len(tokens) - 1, dtype=np.int64)
        values = np.empty(len(tokens) - 1)
        prev = 0
        for j, tok in enumerate(tokens[1:]):
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise ParseError(f"expected idx:val, got {tok!r}", line_no)
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"non-numeric feature token {tok!r}", line_no) from None
            if idx < 1:
                raise ParseError(f"feature index must be >= 1, got {idx}", line_no)
            if idx <= prev:
                raise ParseError(f"feature indices not strictly increasing at {idx}", line_no)
            if not np.isfinite(val):
                raise ParseError(f"non-finite feature value {val_s!r}", line_no)
            indices[j] = idx - 1
            values[j] = val
            prev = idx
        examples.append(Example(indices, values, label))
    if not examples:
        raise ParseError("no examples found in input")
    return Dataset.from_examples(examples)


def load_libsvm(path: str, rule: BinarizeRule | None = None) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_libsvm(fh, rule)


def write_libsvm(dataset: Dataset, stream) -> None:
    """Write a Dataset back to LIBSVM text (1-based indices, full precision)."""
    for ex in dataset:
        feats = " ".join(f"{int(i) + 1}:{float(v)!r}"
                         for i, v in zip(ex.indices, ex.values))
        stream.write(f"{'+1' if ex.label == 1 else '-1'} {feats}".rstrip() + "\n")


def save_libsvm(dataset: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_libsvm(dataset, fh)


def split(dataset: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic shuffled train/test partition.

    Test size is floor(test_fraction * n); both parts keep the order of the
    shuffled permutation and the parent's dim.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0,1), got {test_fraction}")
    n = len(dataset)
    if n == 0:
        raise ValueError("cannot split an empty dataset")
    perm = np.random.default_rng(seed).permutation(n)
    n_test = int(np.floor(test_fraction * n))
    return dataset.subset(perm[: n - n_test]), dataset.subset(perm[n - n_test:])


def stream_order(dataset: Dataset | int, epoch: int, seed: int) -> np.ndarray:
    """Permutation of example indices for one pass; distinct per epoch,
    deterministic given (seed, epoch)."""
    n = dataset if isinstance(dataset, int) else len(dataset)
    return np.random.default_rng([seed, epoch]).permutation(n)
