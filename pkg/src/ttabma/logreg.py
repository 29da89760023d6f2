"""Binary logistic regression on selected prediction columns.

Fitting maximizes the ridge-penalized Bernoulli log-likelihood with a
weighted-Newton (IRLS) solver; the small L2 penalty on non-intercept
coefficients keeps separable and collinear designs finite and is not part
of any reported model score, which always uses the unpenalized
log-likelihood at the returned coefficients.

A compiled kernel (``ttabma._irls``) is preferred when the extension was
built; otherwise the NumPy fallback runs the same iteration. Set
``TTABMA_BACKEND=python`` or ``=compiled`` to force one side.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _irls_py
from .errors import DimensionMismatchError, NonFiniteError, SingleClassError


def _select_backend():
    choice = os.environ.get("TTABMA_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "compiled", "python"):
        raise ValueError(f"unknown TTABMA_BACKEND {choice!r}")
    if choice in ("auto", "compiled"):
        try:
            from . import _irls

            return _irls, "compiled"
        except ImportError:
            if choice == "compiled":
                raise
    return _irls_py, "python"


_KERNEL, BACKEND = _select_backend()

PROB_CLAMP = _irls_py.PROB_CLAMP


@dataclass(frozen=True)
class FitConfig:
    """Solver knobs; defaults suit tables of correlated probability columns."""

    max_iterations: int = 100
    convergence_tol: float = 1e-8
    grad_tol: float = 1e-6
    ridge: float = 1e-6

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if min(self.convergence_tol, self.grad_tol, self.ridge) <= 0.0:
            raise ValueError("tolerances and ridge must be positive")


@dataclass(frozen=True)
class DesignMatrix:
    """Predictor columns and binary labels for one candidate fit."""

    predictors: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.predictors, dtype=np.float64))
        y = np.asarray(self.labels)
        if X.ndim != 2:
            raise DimensionMismatchError("predictors must be a 2-D array")
        if y.shape != (X.shape[0],):
            raise DimensionMismatchError(
                f"{y.shape} labels for {X.shape[0]} predictor rows"
            )
        if not np.all(np.isfinite(X)):
            raise NonFiniteError("non-finite predictor value")
        if not np.all((y == 0) | (y == 1)):
            raise ValueError("labels must be 0 or 1")
        y = y.astype(np.int64)
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "predictors", X)
        object.__setattr__(self, "labels", y)

    @classmethod
    def from_table(cls, table, columns) -> "DesignMatrix":
        """Design over the given column subset of a prediction table."""
        idx = np.asarray(tuple(columns), dtype=np.int64)
        return cls(table.predictions[:, idx], table.labels)

    @property
    def n_rows(self) -> int:
        return self.predictors.shape[0]

    @property
    def n_columns(self) -> int:
        return self.predictors.shape[1]


@dataclass(frozen=True)
class FittedModel:
    """Coefficients at the penalized optimum plus the unpenalized score."""

    intercept: float
    coefficients: np.ndarray
    max_log_likelihood: float
    iterations: int
    converged: bool

    def __post_init__(self):
        coefs = np.asarray(self.coefficients, dtype=np.float64)
        coefs.flags.writeable = False
        object.__setattr__(self, "coefficients", coefs)

    def predict_proba(self, predictors):
        """Sigmoid of the linear score; accepts one row or a matrix."""
        x = np.asarray(predictors, dtype=np.float64)
        eta = self.intercept + x @ self.coefficients
        if np.ndim(eta) == 0:
            return _sigmoid_scalar(float(eta))
        return _irls_py.sigmoid(eta)


def _sigmoid_scalar(z: float) -> float:
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def fit_logistic(design: DesignMatrix, config: FitConfig | None = None) -> FittedModel:
    """Maximum-likelihood fit via IRLS on the penalized objective.

    Raises :class:`SingleClassError` when one class is absent and
    :class:`NonFiniteError` when the weighted normal equations break down
    despite the ridge. Running out of iterations is not an error: the
    best iterate comes back with ``converged`` cleared.
    """
    config = config or FitConfig()
    y = design.labels
    if design.n_rows < 2 or y.min() == y.max():
        raise SingleClassError("fitting needs at least one row of each class")
    beta, iterations, converged, status = _KERNEL.irls_fit(
        design.predictors,
        y.astype(np.float64),
        config.ridge,
        config.max_iterations,
        config.convergence_tol,
        config.grad_tol,
    )
    beta = np.asarray(beta)
    if status == _irls_py.STATUS_SINGULAR:
        raise NonFiniteError("weighted normal equations are singular")
    if status == _irls_py.STATUS_NONFINITE or not np.all(np.isfinite(beta)):
        raise NonFiniteError("fit diverged to non-finite values")
    # scored with the shared NumPy formula so both backends report
    # identical likelihoods for identical coefficients
    mll = _irls_py.log_likelihood(beta, design.predictors, y.astype(np.float64))
    return FittedModel(
        intercept=float(beta[0]),
        coefficients=beta[1:].copy(),
        max_log_likelihood=mll,
        iterations=int(iterations),
        converged=bool(converged),
    )


def log_likelihood(model: FittedModel, design: DesignMatrix) -> float:
    """Unpenalized Bernoulli log-likelihood of the model on the design."""
    if model.coefficients.shape[0] != design.n_columns:
        raise DimensionMismatchError(
            f"{model.coefficients.shape[0]} coefficients for "
            f"{design.n_columns} predictor columns"
        )
    beta = np.concatenate(([model.intercept], model.coefficients))
    return _irls_py.log_likelihood(
        beta, design.predictors, design.labels.astype(np.float64)
    )


def bic(max_log_likelihood: float, n_params: int, n_samples: int) -> float:
    """Bayesian information criterion; n_params counts the intercept."""
    if n_params < 1 or n_samples < 1:
        raise ValueError("n_params and n_samples must be positive")
    return n_params * math.log(n_samples) - 2.0 * max_log_likelihood


def penalized_gradient(model: FittedModel, design: DesignMatrix, ridge: float) -> np.ndarray:
    """Gradient of the penalized objective at the fitted coefficients."""
    beta = np.concatenate(([model.intercept], model.coefficients))
    return _irls_py.gradient(
        beta, design.predictors, design.labels.astype(np.float64), ridge
    )
