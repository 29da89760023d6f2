#!/usr/bin/env python3
"""Benchmark the compiled solver kernel against the NumPy fallback.

Times single fits across design sizes plus a full sweep-and-average run,
then prints one table. Run after building the extension:

    python benchmarks/bench_backends.py
"""

from __future__ import annotations

import time

import numpy as np

from ttabma import _irls_py
from ttabma.data import SyntheticConfig, synthesize

try:
    from ttabma import _irls as _irls_cy
except ImportError:
    _irls_cy = None


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_fits():
    print(f"{'design':>14} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n_rows, n_cols in ((50, 1), (100, 2), (200, 3), (400, 5), (1000, 8)):
        table = synthesize(
            SyntheticConfig(n_rows=n_rows, n_columns=n_cols, seed=n_rows + n_cols)
        )
        X = table.predictions
        y = table.labels.astype(float)
        args = (X, y, 1e-6, 100, 1e-8, 1e-6)
        t_py = time_call(lambda: _irls_py.irls_fit(*args), 30)
        if _irls_cy is None:
            print(f"{n_rows:>6}x{n_cols:<7} {t_py * 1e6:>10.1f}us {'-':>12} {'-':>9}")
            continue
        t_cy = time_call(lambda: _irls_cy.irls_fit(*args), 30)
        print(
            f"{n_rows:>6}x{n_cols:<7} {t_py * 1e6:>10.1f}us {t_cy * 1e6:>10.1f}us "
            f"{t_py / t_cy:>8.1f}x"
        )


def bench_sweep():
    import importlib
    import os

    results = {}
    for backend in ("python", "compiled"):
        if backend == "compiled" and _irls_cy is None:
            continue
        os.environ["TTABMA_BACKEND"] = backend
        import ttabma.logreg

        importlib.reload(ttabma.logreg)
        import ttabma.bma

        importlib.reload(ttabma.bma)
        table = synthesize(SyntheticConfig(n_rows=200, n_columns=6, seed=7))
        results[backend] = time_call(lambda: ttabma.bma.run_bma(table), 5)
    os.environ.pop("TTABMA_BACKEND", None)
    print()
    print("full greedy sweep, 200 rows x 6 columns:")
    for backend, seconds in results.items():
        print(f"  {backend:>8}: {seconds * 1e3:.2f} ms")
    if len(results) == 2:
        print(f"  speedup: {results['python'] / results['compiled']:.1f}x")


if __name__ == "__main__":
    if _irls_cy is None:
        print("compiled kernel unavailable; timing the fallback only")
    bench_fits()
    bench_sweep()
