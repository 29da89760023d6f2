# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled weighted-Newton logistic solver.

Mirrors ``_irls_py.irls_fit`` step for step (same iteration, same
clamping, same halving rule) so the two backends agree to rounding
error. The dense normal equations are solved with an in-place Cholesky
factorization; designs here are small (tens of columns at most), the
row dimension carries the work.
"""

from libc.math cimport exp, fabs, isfinite, log, sqrt

import numpy as np

PROB_CLAMP = 1e-12

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_NONFINITE = 2

cdef int _STATUS_OK = 0
cdef int _STATUS_SINGULAR = 1
cdef double _CLAMP = 1e-12
cdef int _MAX_HALVINGS = 40


cdef inline double _sig(double z) noexcept nogil:
    cdef double e
    if z >= 0.0:
        return 1.0 / (1.0 + exp(-z))
    e = exp(z)
    return e / (1.0 + e)


cdef double _penalized(const double[::1] beta, const double[:, ::1] X,
                       const double[::1] y, double ridge) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t m = X.shape[1]
    cdef Py_ssize_t i, j
    cdef double eta, p, ll = 0.0, pen = 0.0
    for i in range(n):
        eta = beta[0]
        for j in range(m):
            eta += X[i, j] * beta[j + 1]
        p = _sig(eta)
        if p < _CLAMP:
            p = _CLAMP
        elif p > 1.0 - _CLAMP:
            p = 1.0 - _CLAMP
        ll += y[i] * log(p) + (1.0 - y[i]) * log(1.0 - p)
    for j in range(m):
        pen += beta[j + 1] * beta[j + 1]
    return ll - 0.5 * ridge * pen


cdef void _gradient(const double[::1] beta, const double[:, ::1] X,
                    const double[::1] y, double ridge,
                    double[::1] grad) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t m = X.shape[1]
    cdef Py_ssize_t i, j
    cdef double eta, r
    grad[0] = 0.0
    for j in range(m):
        grad[j + 1] = -ridge * beta[j + 1]
    for i in range(n):
        eta = beta[0]
        for j in range(m):
            eta += X[i, j] * beta[j + 1]
        r = y[i] - _sig(eta)
        grad[0] += r
        for j in range(m):
            grad[j + 1] += X[i, j] * r


cdef int _cholesky_solve(double[:, ::1] H, double[::1] b,
                         double[::1] x) noexcept nogil:
    """Solve H x = b for symmetric positive definite H, overwriting H."""
    cdef Py_ssize_t d = H.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double s
    for k in range(d):
        s = H[k, k]
        for j in range(k):
            s -= H[k, j] * H[k, j]
        if not s > 0.0:
            return _STATUS_SINGULAR
        H[k, k] = sqrt(s)
        for i in range(k + 1, d):
            s = H[i, k]
            for j in range(k):
                s -= H[i, j] * H[k, j]
            H[i, k] = s / H[k, k]
    for i in range(d):
        s = b[i]
        for j in range(i):
            s -= H[i, j] * x[j]
        x[i] = s / H[i, i]
    for i in range(d - 1, -1, -1):
        s = x[i]
        for j in range(i + 1, d):
            s -= H[j, i] * x[j]
        x[i] = s / H[i, i]
    return _STATUS_OK


def log_likelihood(beta_in, X_in, y_in):
    """Unpenalized Bernoulli log-likelihood, probabilities clamped."""
    cdef const double[::1] beta = np.ascontiguousarray(beta_in, dtype=np.float64)
    cdef const double[:, ::1] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef const double[::1] y = np.ascontiguousarray(y_in, dtype=np.float64)
    return _penalized(beta, X, y, 0.0)


def irls_fit(X_in, y_in, double ridge, int max_iterations,
             double coef_tol, double grad_tol):
    """Fit; beta[0] is the intercept, the ridge skips it.

    Returns ``(beta, iterations, converged, status)``.
    """
    cdef const double[:, ::1] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef const double[::1] y = np.ascontiguousarray(y_in, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t m = X.shape[1]
    cdef Py_ssize_t d = m + 1

    beta_arr = np.zeros(d)
    cdef double[::1] beta = beta_arr
    grad_arr = np.empty(d)
    cdef double[::1] grad = grad_arr
    cdef double[:, ::1] H = np.empty((d, d))
    cdef double[::1] delta = np.empty(d)
    cdef double[::1] trial = np.empty(d)

    cdef double objective = _penalized(beta, X, y, ridge)
    cdef int iterations = 0
    cdef int it, h
    cdef Py_ssize_t i, j, k
    cdef double gmax, eta, p, w, step, trial_objective, change, sw
    cdef bint accepted, finite

    for it in range(max_iterations):
        _gradient(beta, X, y, ridge, grad)
        gmax = 0.0
        for j in range(d):
            if fabs(grad[j]) > gmax:
                gmax = fabs(grad[j])
        if gmax <= grad_tol:
            break
        # Penalized Hessian (negated): intercept block plus weighted
        # cross-products plus the ridge on the coefficient diagonal.
        sw = 0.0
        for j in range(d):
            for k in range(d):
                H[j, k] = 0.0
        for i in range(n):
            eta = beta[0]
            for j in range(m):
                eta += X[i, j] * beta[j + 1]
            p = _sig(eta)
            w = p * (1.0 - p)
            sw += w
            for j in range(m):
                H[0, j + 1] += X[i, j] * w
                for k in range(j, m):
                    H[j + 1, k + 1] += X[i, j] * X[i, k] * w
        H[0, 0] = sw
        for j in range(m):
            H[j + 1, 0] = H[0, j + 1]
            H[j + 1, j + 1] += ridge
            for k in range(j + 1, m):
                H[k + 1, j + 1] = H[j + 1, k + 1]
        if _cholesky_solve(H, grad, delta) != _STATUS_OK:
            return beta_arr, iterations, False, STATUS_SINGULAR
        finite = True
        for j in range(d):
            if not isfinite(delta[j]):
                finite = False
        if not finite:
            return beta_arr, iterations, False, STATUS_NONFINITE

        step = 1.0
        accepted = False
        trial_objective = 0.0
        for h in range(_MAX_HALVINGS):
            for j in range(d):
                trial[j] = beta[j] + step * delta[j]
            trial_objective = _penalized(trial, X, y, ridge)
            if isfinite(trial_objective) and trial_objective >= objective:
                accepted = True
                break
            step *= 0.5
        iterations += 1
        if not accepted:
            break
        change = 0.0
        for j in range(d):
            if fabs(delta[j]) > change:
                change = fabs(delta[j])
        change *= step
        for j in range(d):
            beta[j] = trial[j]
        objective = trial_objective
        if change <= coef_tol:
            break

    finite = True
    for j in range(d):
        if not isfinite(beta[j]):
            finite = False
    if not finite:
        return beta_arr, iterations, False, STATUS_NONFINITE
    _gradient(beta, X, y, ridge, grad)
    gmax = 0.0
    for j in range(d):
        if fabs(grad[j]) > gmax:
            gmax = fabs(grad[j])
    return beta_arr, iterations, gmax <= grad_tol, STATUS_OK
