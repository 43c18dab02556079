"""Time tree growing and prediction under both backends.

The sampling loops retrain a tree after every measurement, so grow() is
the hot kernel.  This script times grow+predict round trips on synthetic
tables of increasing size for the jit kernels and the plain numpy
twins, and prints the speedup.  The first jit call compiles; it is run
once before timing.

Usage: python3 benchmarks/bench_cart.py [--rounds 30]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from confrank.cart import _numba, _numpy


def _table(n_rows: int, n_features: int, seed: int):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 2, size=(n_rows, n_features)).astype(np.float64)
    w = rng.uniform(-5.0, 5.0, size=n_features)
    y = 50.0 + X @ w + rng.normal(0.0, 1.0, size=n_rows)
    return X, y


def _time_backend(mod, X, y, rounds: int) -> float:
    best = float("inf")
    for _ in range(rounds):
        t0 = time.perf_counter()
        feature, threshold, left, right, value, _, n_nodes = mod.grow(
            X, y, 2, 1, -1,
        )
        mod.predict(feature[:n_nodes], threshold[:n_nodes], left[:n_nodes],
                    right[:n_nodes], value[:n_nodes], X)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rounds", type=int, default=30)
    args = parser.parse_args()

    warm_X, warm_y = _table(64, 6, seed=0)
    _numba.grow(warm_X, warm_y, 2, 1, -1)  # compile outside the clock

    print(f"{'rows':>6} {'features':>8} {'numba':>12} {'numpy':>12} "
          f"{'speedup':>8}")
    for n_rows, n_features in ((50, 8), (200, 10), (1000, 12), (4000, 14)):
        X, y = _table(n_rows, n_features, seed=n_rows)
        t_jit = _time_backend(_numba, X, y, args.rounds)
        t_np = _time_backend(_numpy, X, y, args.rounds)
        print(f"{n_rows:>6} {n_features:>8} {t_jit * 1e3:>10.2f}ms "
              f"{t_np * 1e3:>10.2f}ms {t_np / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()
