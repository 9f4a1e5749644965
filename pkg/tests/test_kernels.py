"""Both kernel paths (jit and numpy) must agree bit for bit."""

import numpy as np

from joint_effect._kernels import (
    USING_NUMBA,
    _bootstrap_effects_numpy,
    _midranks_numpy,
    _rank_sums_numpy,
    bootstrap_effects_kernel,
    midranks_kernel,
    rank_sums_kernel,
    split_constants,
)

from conftest import midranks_brute


def random_cases(seed, count=60):
    g = np.random.default_rng(seed)
    for _ in range(count):
        n = int(g.integers(1, 80))
        yield g.integers(-6, 6, size=n).astype(float)


def test_midranks_paths_agree_and_match_brute_force():
    for values in random_cases(0):
        a = midranks_kernel(values)
        b = _midranks_numpy(values)
        assert np.array_equal(a, b)
        assert np.array_equal(a, midranks_brute(values))


def test_rank_sums_paths_agree():
    g = np.random.default_rng(1)
    for _ in range(60):
        n = int(g.integers(2, 60))
        m = int(g.integers(1, 60))
        xs = np.sort(g.integers(-5, 5, size=n).astype(float))
        y = g.integers(-5, 5, size=m).astype(float)
        lo_count, hi_start, _ = split_constants(n)
        assert rank_sums_kernel(xs, y, lo_count, hi_start) == _rank_sums_numpy(
            xs, y, lo_count, hi_start
        )


def test_bootstrap_paths_agree():
    g = np.random.default_rng(2)
    for n, m in [(10, 10), (13, 7), (2, 5)]:
        x = g.normal(size=n)
        y = g.normal(size=m)
        xi = g.integers(0, n, size=(50, n))
        yi = g.integers(0, m, size=(50, m))
        a = bootstrap_effects_kernel(x, y, xi, yi)
        b = _bootstrap_effects_numpy(x, y, xi, yi)
        assert np.array_equal(a, b)


def test_split_constants():
    assert split_constants(10) == (5, 5, 25.0)  # even: halves at K = n/2
    lo, hi, d = split_constants(9)  # odd: median index dropped
    assert (lo, hi) == (4, 5)
    assert d == 9 * 10 / 2 - 25


def test_numba_path_active_unless_disabled():
    import os

    flag = os.environ.get("JOINT_EFFECT_NO_NUMBA", "").strip() not in ("", "0")
    assert USING_NUMBA == (not flag)
