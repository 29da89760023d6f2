"""Row-level aggregation and the inclusion-weighted accuracy spread."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EmptyRowError, OutOfRangeError
from .logreg import PROB_CLAMP, _sigmoid_scalar

THRESHOLD = 0.5


@dataclass(frozen=True)
class AggregatedPrediction:
    probability: float
    label: int
    method: str


@dataclass(frozen=True)
class UncertaintyReport:
    """Per-column accuracies and their weighted spread around the BMA accuracy."""

    sigma: float
    per_column_accuracy: np.ndarray
    bma_accuracy: float


def predict_bma(summary, row) -> AggregatedPrediction:
    """Sigmoid of the averaged linear score for one prediction row."""
    x = np.asarray(row, dtype=np.float64)
    if x.shape != (summary.n_columns,):
        raise DimensionMismatchError(
            f"row of length {x.shape} for {summary.n_columns} columns"
        )
    if not np.all(np.isfinite(x)):
        raise OutOfRangeError("row entries must be finite")
    eta = summary.expected_intercept + float(x @ summary.expected_coeffs)
    # the package-wide probability clamp keeps the output strictly inside
    # (0, 1) even where the sigmoid saturates in double precision
    probability = min(max(_sigmoid_scalar(eta), PROB_CLAMP), 1.0 - PROB_CLAMP)
    return AggregatedPrediction(probability, int(probability >= THRESHOLD), "bma")


def predict_mean(row) -> AggregatedPrediction:
    """Plain average of the prediction columns, the usual TTA baseline."""
    x = np.asarray(row, dtype=np.float64)
    if x.size == 0:
        raise EmptyRowError("cannot average an empty row")
    if not np.all(np.isfinite(x)) or x.min() < 0.0 or x.max() > 1.0:
        raise OutOfRangeError("row entries must lie in [0, 1]")
    probability = float(np.mean(x))
    return AggregatedPrediction(probability, int(probability >= THRESHOLD), "mean")


def column_accuracies(table) -> np.ndarray:
    """Accuracy of thresholding each column at 0.5 against the labels."""
    hits = (table.predictions >= THRESHOLD).astype(np.int64) == table.labels[:, None]
    return hits.mean(axis=0)


def uncertainty(summary, table, bma_accuracy: float) -> UncertaintyReport:
    """Root mean square of inclusion-weighted accuracy deviations.

    Each column's standalone accuracy is compared with the BMA accuracy
    on the same table, scaled by the column's inclusion probability
    before squaring, so ignored columns cannot contribute spread.
    """
    if table.n_columns != summary.n_columns:
        raise DimensionMismatchError(
            f"table has {table.n_columns} columns, summary {summary.n_columns}"
        )
    if not 0.0 <= bma_accuracy <= 1.0:
        raise OutOfRangeError("bma_accuracy must lie in [0, 1]")
    accs = column_accuracies(table)
    deviations = summary.inclusion_prob * (accs - bma_accuracy)
    sigma = float(np.sqrt(np.mean(deviations**2)))
    return UncertaintyReport(sigma, accs, bma_accuracy)
