"""Pure-NumPy fallback for the weighted-Newton logistic solver.

Mirrors the compiled kernel in ``_irls.pyx`` step for step: Newton ascent
on the ridge-penalized Bernoulli log-likelihood with step halving, so the
two backends track each other to rounding error.
"""

from __future__ import annotations

import numpy as np

PROB_CLAMP = 1e-12

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_NONFINITE = 2

_MAX_HALVINGS = 40


def sigmoid(eta: np.ndarray) -> np.ndarray:
    out = np.empty_like(eta)
    pos = eta >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    ez = np.exp(eta[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_likelihood(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    """Unpenalized Bernoulli log-likelihood, probabilities clamped."""
    p = sigmoid(beta[0] + X @ beta[1:])
    p = np.clip(p, PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(np.sum(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def _penalized(beta: np.ndarray, X: np.ndarray, y: np.ndarray, ridge: float) -> float:
    return log_likelihood(beta, X, y) - 0.5 * ridge * float(beta[1:] @ beta[1:])


def gradient(beta: np.ndarray, X: np.ndarray, y: np.ndarray, ridge: float) -> np.ndarray:
    resid = y - sigmoid(beta[0] + X @ beta[1:])
    grad = np.empty(beta.shape[0])
    grad[0] = resid.sum()
    grad[1:] = X.T @ resid - ridge * beta[1:]
    return grad


def irls_fit(
    X: np.ndarray,
    y: np.ndarray,
    ridge: float,
    max_iterations: int,
    coef_tol: float,
    grad_tol: float,
):
    """Fit; beta[0] is the intercept, the ridge skips it.

    Returns ``(beta, iterations, converged, status)``. Each iteration
    solves the penalized normal equations for the Newton direction and
    halves the step until the penalized objective does not decrease, so
    the final iterate is also the best one seen.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _irls_loop(X, y, ridge, max_iterations, coef_tol, grad_tol)


def _irls_loop(X, y, ridge, max_iterations, coef_tol, grad_tol):
    m = X.shape[1]
    beta = np.zeros(m + 1)
    objective = _penalized(beta, X, y, ridge)
    iterations = 0
    for _ in range(max_iterations):
        grad = gradient(beta, X, y, ridge)
        if np.max(np.abs(grad)) <= grad_tol:
            break
        p = sigmoid(beta[0] + X @ beta[1:])
        w = p * (1.0 - p)
        H = np.empty((m + 1, m + 1))
        H[0, 0] = w.sum()
        xw = X.T @ w
        H[0, 1:] = xw
        H[1:, 0] = xw
        H[1:, 1:] = (X.T * w) @ X + ridge * np.eye(m)
        try:
            delta = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            return beta, iterations, False, STATUS_SINGULAR
        if not np.all(np.isfinite(delta)):
            return beta, iterations, False, STATUS_NONFINITE
        step = 1.0
        accepted = False
        for _ in range(_MAX_HALVINGS):
            trial = beta + step * delta
            trial_objective = _penalized(trial, X, y, ridge)
            if np.isfinite(trial_objective) and trial_objective >= objective:
                accepted = True
                break
            step *= 0.5
        iterations += 1
        if not accepted:
            break
        change = step * float(np.max(np.abs(delta)))
        beta = trial
        objective = trial_objective
        if change <= coef_tol:
            break
    if not np.all(np.isfinite(beta)):
        return beta, iterations, False, STATUS_NONFINITE
    grad = gradient(beta, X, y, ridge)
    converged = bool(np.max(np.abs(grad)) <= grad_tol)
    return beta, iterations, converged, STATUS_OK
