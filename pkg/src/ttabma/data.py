"""Prediction tables: CSV ingestion, validation, and a synthetic generator.

A table holds one row per test sample and one probability column per
prediction source: column 0 is the primary prediction, columns 1..k the
augmented variants. The CSV boundary is deliberately strict so files
round-trip bit for bit: UTF-8, LF line endings, header
``label,pred_0,...,pred_k``, labels in {0,1}, predictions written with 17
significant digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyTableError,
    MissingHeaderError,
    NonBinaryLabelError,
    NonNumericFieldError,
    OutOfRangeError,
    RaggedRowError,
)
from .rng import Xoshiro256

# Latent class-logit mixture used by the generator: a row's true logit is
# side * (MARGIN + SCALE * |N(0,1)|) with a fair coin for the side, i.e. a
# symmetric mixture of folded normals. The margin keeps every latent
# probability at least sigmoid(MARGIN) away from chance, the way confident
# classifier outputs cluster near 0 and 1.
MIXTURE_LOGIT_MARGIN = 0.5
MIXTURE_LOGIT_SCALE = 1.0


@dataclass(frozen=True)
class PredictionTable:
    """Per-sample prediction columns (values in [0, 1]) and binary labels."""

    predictions: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        preds = np.ascontiguousarray(np.asarray(self.predictions, dtype=np.float64))
        labels = np.asarray(self.labels)
        if preds.ndim != 2 or preds.shape[1] < 1:
            raise DimensionMismatchError(
                "predictions must be a 2-D array with at least one column"
            )
        if labels.shape != (preds.shape[0],):
            raise DimensionMismatchError(
                f"{labels.shape} labels for {preds.shape[0]} prediction rows"
            )
        if not np.all(np.isfinite(preds)):
            raise OutOfRangeError("non-finite prediction value")
        if preds.size and (preds.min() < 0.0 or preds.max() > 1.0):
            raise OutOfRangeError("prediction values must lie in [0, 1]")
        mask = (labels == 0) | (labels == 1)
        if not np.all(mask):
            raise NonBinaryLabelError("labels must be 0 or 1")
        labels = labels.astype(np.int64)
        preds.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "predictions", preds)
        object.__setattr__(self, "labels", labels)

    @property
    def n_rows(self) -> int:
        return self.predictions.shape[0]

    @property
    def n_columns(self) -> int:
        return self.predictions.shape[1]

    def column(self, index: int) -> np.ndarray:
        return self.predictions[:, index]

    def take(self, row_indices) -> "PredictionTable":
        """New table holding the given rows, in the given order."""
        idx = np.asarray(row_indices, dtype=np.int64)
        return PredictionTable(self.predictions[idx], self.labels[idx])


@dataclass(frozen=True)
class SyntheticConfig:
    """Generator parameters; the output is a pure function of these."""

    n_rows: int
    n_columns: int
    signal_noise: float = 0.5
    adversarial_columns: frozenset = frozenset()
    label_flip_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "adversarial_columns", frozenset(self.adversarial_columns)
        )
        if self.n_rows < 1 or self.n_columns < 1:
            raise ValueError("n_rows and n_columns must be positive")
        if self.signal_noise < 0.0:
            raise ValueError("signal_noise must be non-negative")
        if not 0.0 <= self.label_flip_rate < 0.5:
            raise ValueError("label_flip_rate must lie in [0, 0.5)")
        if any(
            not 0 <= c < self.n_columns for c in self.adversarial_columns
        ):
            raise ValueError("adversarial column indices must be < n_columns")


def _sigmoid(z: float) -> float:
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def synthesize(config: SyntheticConfig) -> PredictionTable:
    """Generate a table of noisy views of a latent per-row probability.

    Draw order is fixed and part of the format: first, per row, a class
    side (one uniform), a logit offset (one normal), a label draw and a
    flip draw (one uniform each, the flip draw consumed even when the
    rate is zero); then column by column, row by row, one normal per
    clean cell (``sigmoid(logit + signal_noise * normal)``) or one
    open-interval uniform per adversarial cell.
    """
    rng = Xoshiro256(config.seed)
    n, k1 = config.n_rows, config.n_columns
    logits = np.empty(n)
    labels = np.empty(n, dtype=np.int64)
    for r in range(n):
        side = 1.0 if rng.uniform() < 0.5 else -1.0
        z = side * (MIXTURE_LOGIT_MARGIN + MIXTURE_LOGIT_SCALE * abs(rng.normal()))
        p_true = _sigmoid(z)
        y = 1 if rng.uniform() < p_true else 0
        if rng.uniform() < config.label_flip_rate:
            y = 1 - y
        logits[r] = z
        labels[r] = y
    columns = np.empty((n, k1))
    for c in range(k1):
        if c in config.adversarial_columns:
            for r in range(n):
                columns[r, c] = rng.open_uniform()
        else:
            for r in range(n):
                columns[r, c] = _sigmoid(logits[r] + config.signal_noise * rng.normal())
    return PredictionTable(columns, labels)


def _parse_header(line: str) -> int:
    fields = line.split(",")
    if len(fields) < 2 or fields[0] != "label":
        raise MissingHeaderError(f"expected 'label,pred_0,...' header, got {line!r}")
    for i, name in enumerate(fields[1:]):
        if name != f"pred_{i}":
            raise MissingHeaderError(
                f"expected column 'pred_{i}' in header, got {name!r}"
            )
    return len(fields) - 1


def load_csv(path) -> PredictionTable:
    """Read a prediction table, pointing at the first offending location."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MissingHeaderError("empty file")
    n_columns = _parse_header(lines[0])
    rows = []
    labels = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != n_columns + 1:
            raise RaggedRowError(
                f"line {lineno}: expected {n_columns + 1} fields, got {len(fields)}",
                line=lineno,
            )
        try:
            label = float(fields[0])
        except ValueError:
            raise NonBinaryLabelError(
                f"line {lineno}: label {fields[0]!r} is not 0 or 1", line=lineno
            ) from None
        if label not in (0.0, 1.0):
            raise NonBinaryLabelError(
                f"line {lineno}: label {fields[0]!r} is not 0 or 1", line=lineno
            )
        row = []
        for col, field in enumerate(fields[1:]):
            try:
                value = float(field)
            except ValueError:
                raise NonNumericFieldError(
                    f"line {lineno}, column pred_{col}: {field!r} is not a number",
                    line=lineno,
                    column=col,
                ) from None
            if not 0.0 <= value <= 1.0:
                raise OutOfRangeError(
                    f"line {lineno}, column pred_{col}: {field!r} outside [0, 1]",
                    line=lineno,
                    column=col,
                )
            row.append(value)
        labels.append(int(label))
        rows.append(row)
    if not rows:
        raise EmptyTableError("no data rows")
    return PredictionTable(np.array(rows, dtype=np.float64), np.array(labels))


def save_csv(table: PredictionTable, path) -> None:
    """Write a table in the exact format ``load_csv`` reads back."""
    header = ",".join(["label"] + [f"pred_{i}" for i in range(table.n_columns)])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for r in range(table.n_rows):
            values = ",".join(format(v, ".17g") for v in table.predictions[r])
            fh.write(f"{int(table.labels[r])},{values}\n")
