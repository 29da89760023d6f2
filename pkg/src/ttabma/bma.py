"""Candidate-subset search and model averaging over prediction columns.

Each non-empty subset of columns defines a candidate logistic model whose
likelihood is approximated as ``exp(-BIC/2)``. Greedy mode scans subsets
size by size in lexicographic order, keeps only candidates that strictly
beat the running likelihood record, and seeds the next size with the
survivors; full mode scores every subset (the textbook average, feasible
only for small column counts). All likelihood arithmetic runs in log
space; ``exp(-BIC/2)`` itself underflows for realistic sample sizes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteError, SingleClassError, TooManyColumnsError
from .logreg import DesignMatrix, FitConfig, FittedModel, bic, fit_logistic

MODES = ("greedy", "full")


@dataclass(frozen=True)
class CandidateModel:
    """One scored subset: fit, BIC, and log model likelihood (-BIC/2)."""

    subset: tuple[int, ...]
    fitted: FittedModel
    bic: float
    log_model_likelihood: float

    def __post_init__(self):
        subset = tuple(int(j) for j in self.subset)
        if not subset:
            raise ValueError("subset must be non-empty")
        if subset[0] < 0 or any(b <= a for a, b in zip(subset, subset[1:])):
            raise ValueError("subset must be sorted and duplicate-free")
        if self.log_model_likelihood != -self.bic / 2:
            raise ValueError("log_model_likelihood must equal -bic/2 exactly")
        object.__setattr__(self, "subset", subset)


@dataclass(frozen=True)
class BmaConfig:
    mode: str = "greedy"
    fit: FitConfig = field(default_factory=FitConfig)
    max_columns: int = 25

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.max_columns < 1:
            raise ValueError("max_columns must be positive")


@dataclass(frozen=True)
class BmaSummary:
    """Accepted models plus the normalized column-level aggregates."""

    accepted: tuple[CandidateModel, ...]
    log_l_total: float
    inclusion_prob: np.ndarray
    expected_coeffs: np.ndarray
    expected_intercept: float
    mode: str

    def __post_init__(self):
        inclusion = np.asarray(self.inclusion_prob, dtype=np.float64)
        coeffs = np.asarray(self.expected_coeffs, dtype=np.float64)
        inclusion.flags.writeable = False
        coeffs.flags.writeable = False
        object.__setattr__(self, "inclusion_prob", inclusion)
        object.__setattr__(self, "expected_coeffs", coeffs)

    @property
    def n_columns(self) -> int:
        return self.inclusion_prob.shape[0]

    def posterior_weights(self) -> np.ndarray:
        """Normalized weight of each accepted model, in acceptance order."""
        return np.array(
            [posterior_weight(m, self.log_l_total) for m in self.accepted]
        )


def generate_candidates(size, previous_accepted, n_columns) -> list[tuple[int, ...]]:
    """Size-``size`` subsets to score, in lexicographic order.

    Size 1 yields every singleton; larger sizes yield the subsets that
    contain at least one accepted subset from the previous size, so an
    empty ``previous_accepted`` ends the sweep.
    """
    if not 1 <= size <= n_columns:
        raise ValueError(f"size {size} out of range for {n_columns} columns")
    if size == 1:
        return [(j,) for j in range(n_columns)]
    previous = [frozenset(s) for s in previous_accepted]
    if not previous:
        return []
    candidates = []
    for combo in itertools.combinations(range(n_columns), size):
        members = frozenset(combo)
        if any(p <= members for p in previous):
            candidates.append(combo)
    return candidates


def run_bma(table, config: BmaConfig | None = None) -> BmaSummary:
    """Sweep candidate subsets and average the accepted models.

    The likelihood record starts at -inf in log space, persists across
    sizes, and only strict improvements are accepted, so ties resolve to
    the earlier candidate in scan order and the accepted models carry
    strictly increasing log likelihoods.
    """
    config = config or BmaConfig()
    k1 = table.n_columns
    if k1 > config.max_columns:
        raise TooManyColumnsError(
            f"{k1} columns exceeds max_columns={config.max_columns}"
        )
    labels = table.labels
    if table.n_rows < 2 or labels.min() == labels.max():
        raise SingleClassError("table must contain both label classes")

    accepted: list[CandidateModel] = []
    log_l_total = -math.inf
    log_l_max = -math.inf
    previous: list[tuple[int, ...]] = []
    for size in range(1, k1 + 1):
        if config.mode == "greedy":
            candidates = generate_candidates(size, previous, k1)
        else:
            candidates = list(itertools.combinations(range(k1), size))
        current: list[tuple[int, ...]] = []
        for subset in candidates:
            design = DesignMatrix.from_table(table, subset)
            try:
                fitted = fit_logistic(design, config.fit)
            except NonFiniteError as exc:
                raise NonFiniteError(f"candidate {subset}: {exc}") from exc
            value = bic(fitted.max_log_likelihood, len(subset) + 1, table.n_rows)
            log_ml = -0.5 * value
            if config.mode == "full" or log_ml > log_l_max:
                if config.mode == "greedy":
                    log_l_max = log_ml
                log_l_total = float(np.logaddexp(log_l_total, log_ml))
                accepted.append(CandidateModel(subset, fitted, value, log_ml))
                current.append(subset)
        previous = current

    inclusion = np.zeros(k1)
    coeffs = np.zeros(k1)
    intercept = 0.0
    for model in accepted:
        weight = math.exp(model.log_model_likelihood - log_l_total)
        for position, j in enumerate(model.subset):
            inclusion[j] += weight
            coeffs[j] += weight * model.fitted.coefficients[position]
        intercept += weight * model.fitted.intercept
    return BmaSummary(
        accepted=tuple(accepted),
        log_l_total=log_l_total,
        inclusion_prob=inclusion,
        expected_coeffs=coeffs,
        expected_intercept=intercept,
        mode=config.mode,
    )


def posterior_weight(model: CandidateModel, log_l_total: float) -> float:
    """Posterior probability of an accepted model under the uniform prior."""
    return math.exp(model.log_model_likelihood - log_l_total)


def bayes_factor(model_a: CandidateModel, model_b: CandidateModel) -> float:
    """Evidence ratio of model A over model B; above 1 favors A."""
    return math.exp(model_a.log_model_likelihood - model_b.log_model_likelihood)
