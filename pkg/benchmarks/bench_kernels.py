#!/usr/bin/env python3
"""Benchmark the jit kernels against the pure-numpy fallback path.

Run:  python benchmarks/bench_kernels.py
The package-level switch is the JOINT_EFFECT_NO_NUMBA=1 environment variable;
here both implementations are imported directly and timed side by side.
"""

import time

import numpy as np

from joint_effect._kernels import (
    USING_NUMBA,
    _bootstrap_effects_numpy,
    _midranks_numpy,
    bootstrap_effects_kernel,
    midranks_kernel,
)


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    rng = np.random.default_rng(0)
    print(f"numba path active: {USING_NUMBA}\n")
    print(f"{'kernel':<34} {'numba':>10} {'numpy':>10} {'speedup':>8}")

    for n in (1_000, 100_000):
        values = rng.normal(size=n)
        values[:: max(n // 50, 1)] = 0.0  # some ties
        midranks_kernel(values)  # warm the jit
        t_jit = best_of(lambda: midranks_kernel(values))
        t_np = best_of(lambda: _midranks_numpy(values))
        print(f"{'midranks n=' + str(n):<34} {t_jit * 1e3:9.2f}ms {t_np * 1e3:9.2f}ms "
              f"{t_np / t_jit:7.1f}x")

    for n, B in ((50, 1000), (200, 1000)):
        x = rng.normal(size=n)
        y = rng.normal(size=n)
        xi = rng.integers(0, n, size=(B, n))
        yi = rng.integers(0, n, size=(B, n))
        bootstrap_effects_kernel(x, y, xi, yi)  # warm the jit
        t_jit = best_of(lambda: bootstrap_effects_kernel(x, y, xi, yi))
        t_np = best_of(lambda: _bootstrap_effects_numpy(x, y, xi, yi))
        label = f"bootstrap n=m={n}, B={B}"
        print(f"{label:<34} {t_jit * 1e3:9.2f}ms {t_np * 1e3:9.2f}ms {t_np / t_jit:7.1f}x")


if __name__ == "__main__":
    main()
