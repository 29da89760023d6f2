"""Confusion-matrix metrics (class 1 positive) and run aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import EmptyInputError, LengthMismatchError


class MetricValue(NamedTuple):
    """A metric plus a flag for a degenerate (zero) denominator."""

    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(predicted_labels, true_labels) -> ConfusionCounts:
    if len(predicted_labels) != len(true_labels):
        raise LengthMismatchError(
            f"{len(predicted_labels)} predictions for {len(true_labels)} labels"
        )
    tp = fp = tn = fn = 0
    for pred, truth in zip(predicted_labels, true_labels):
        if pred not in (0, 1) or truth not in (0, 1):
            raise ValueError("labels must be 0 or 1")
        if pred == 1:
            if truth == 1:
                tp += 1
            else:
                fp += 1
        else:
            if truth == 1:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp, fp, tn, fn)


def accuracy(counts: ConfusionCounts) -> MetricValue:
    if counts.total == 0:
        return MetricValue(0.0, True)
    return MetricValue((counts.tp + counts.tn) / counts.total)


def precision(counts: ConfusionCounts) -> MetricValue:
    denom = counts.tp + counts.fp
    if denom == 0:
        return MetricValue(0.0, True)
    return MetricValue(counts.tp / denom)


def recall(counts: ConfusionCounts) -> MetricValue:
    denom = counts.tp + counts.fn
    if denom == 0:
        return MetricValue(0.0, True)
    return MetricValue(counts.tp / denom)


def f1(counts: ConfusionCounts) -> MetricValue:
    # 2*tp/(2*tp+fp+fn) equals the harmonic mean of precision and recall
    # whenever precision + recall > 0.
    denom = 2 * counts.tp + counts.fp + counts.fn
    if denom == 0:
        return MetricValue(0.0, True)
    return MetricValue(2 * counts.tp / denom)


def mean_std(values: Sequence[float], ddof: int = 0) -> tuple[float, float]:
    """Mean and standard deviation; population form (ddof=0) by default."""
    n = len(values)
    if n == 0:
        raise EmptyInputError("mean_std of an empty sequence")
    if not 0 <= ddof < n:
        raise ValueError("ddof must satisfy 0 <= ddof < len(values)")
    if min(values) == max(values):
        # exact: dividing the sum back by n can round off the common value
        return float(values[0]), 0.0
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / (n - ddof)
    return mean, math.sqrt(variance)
