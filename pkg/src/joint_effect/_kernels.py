"""Hot numeric kernels: midranks, the estimator pair, and the bootstrap loop.

Two implementations live here. The numba path compiles the inner loops with
@njit (parallel bootstrap over replications); the pure-numpy path is selected
by setting JOINT_EFFECT_NO_NUMBA=1 (or automatically when numba is absent).
Both paths produce bit-identical results: rank sums are half-integers held
exactly in float64, and each estimator performs a single division by m*n.
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("JOINT_EFFECT_NO_NUMBA", "").strip() not in ("", "0")

try:  # pragma: no cover - exercised via the env flag in CI
    if _FORCE_NUMPY:
        raise ImportError
    from numba import njit, prange

    USING_NUMBA = True
except ImportError:
    USING_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# numpy implementations


def _midranks_numpy(values: np.ndarray) -> np.ndarray:
    v = np.ascontiguousarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    sv = v[order]
    n = len(v)
    boundary = np.empty(n, dtype=bool)
    boundary[0] = True
    boundary[1:] = sv[1:] != sv[:-1]
    starts = np.flatnonzero(boundary)
    counts = np.diff(np.append(starts, n))
    mids = starts + 1 + (counts - 1) / 2.0
    ranks = np.empty(n)
    ranks[order] = np.repeat(mids, counts)
    return ranks


def split_constants(n: int) -> tuple[int, int, float]:
    """(lo_count, hi_start, positional offset) for the i2 rank sums.

    Even n sums the lower and upper halves of the sorted x sample; odd n drops
    the median observation from both sums (the quantile-composition weights of
    the median cancel), which keeps the estimator inside the feasible region.
    """
    k = (n + 1) // 2
    if n % 2 == 0:
        return k, k, n * (n + 1) / 2.0 - k * (k + 1)
    return k - 1, k, n * (n + 1) / 2.0 - float(k) * k


def _rank_sums_numpy(
    xs: np.ndarray, y: np.ndarray, lo_count: int, hi_start: int
) -> tuple[float, float, float]:
    n = len(xs)
    ranks = _midranks_numpy(np.concatenate([xs, y]))
    rx = ranks[:n]
    return float(rx[:lo_count].sum()), float(rx[hi_start:].sum()), float(ranks[n:].sum())


def _bootstrap_effects_numpy(
    x: np.ndarray, y: np.ndarray, xi: np.ndarray, yi: np.ndarray
) -> np.ndarray:
    B = xi.shape[0]
    n, m = x.shape[0], y.shape[0]
    lo_count, hi_start, d = split_constants(n)
    mn = float(m) * float(n)
    out = np.empty((B, 2))
    for b in range(B):
        xs = np.sort(x[xi[b]])
        lo, hi, ry = _rank_sums_numpy(xs, y[yi[b]], lo_count, hi_start)
        out[b, 0] = (ry - m * (m + 1) / 2.0) / mn
        out[b, 1] = 2.0 * (hi - lo - d) / mn
    return out


# ---------------------------------------------------------------------------
# numba implementations (same contracts)


@njit(cache=True)
def _midranks_jit(values):  # pragma: no cover - covered through dispatch
    n = values.shape[0]
    order = np.argsort(values)
    ranks = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = 0.5 * (i + j) + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = mid
        i = j + 1
    return ranks


@njit(cache=True)
def _rank_sums_jit(xs, y, lo_count, hi_start):  # pragma: no cover
    n = xs.shape[0]
    m = y.shape[0]
    pooled = np.empty(n + m)
    pooled[:n] = xs
    pooled[n:] = y
    ranks = _midranks_jit(pooled)
    lo = 0.0
    hi = 0.0
    for i in range(n):
        if i < lo_count:
            lo += ranks[i]
        elif i >= hi_start:
            hi += ranks[i]
    ry = 0.0
    for j in range(n, n + m):
        ry += ranks[j]
    return lo, hi, ry


@njit(cache=True, parallel=True)
def _bootstrap_effects_jit(x, y, xi, yi, lo_count, hi_start, d):  # pragma: no cover
    B = xi.shape[0]
    n = x.shape[0]
    m = y.shape[0]
    mn = float(m) * float(n)
    out = np.empty((B, 2))
    for b in prange(B):
        xs = x[xi[b]].copy()
        xs.sort()
        ys = y[yi[b]].copy()
        lo, hi, ry = _rank_sums_jit(xs, ys, lo_count, hi_start)
        out[b, 0] = (ry - m * (m + 1) / 2.0) / mn
        out[b, 1] = 2.0 * (hi - lo - d) / mn
    return out


# ---------------------------------------------------------------------------
# dispatch

if USING_NUMBA:
    def midranks_kernel(values: np.ndarray) -> np.ndarray:
        return _midranks_jit(np.ascontiguousarray(values, dtype=np.float64))

    def rank_sums_kernel(
        xs: np.ndarray, y: np.ndarray, lo_count: int, hi_start: int
    ) -> tuple[float, float, float]:
        return _rank_sums_jit(
            np.ascontiguousarray(xs, dtype=np.float64),
            np.ascontiguousarray(y, dtype=np.float64),
            lo_count,
            hi_start,
        )

    def bootstrap_effects_kernel(x, y, xi, yi) -> np.ndarray:
        lo_count, hi_start, d = split_constants(len(x))
        return _bootstrap_effects_jit(
            np.ascontiguousarray(x, dtype=np.float64),
            np.ascontiguousarray(y, dtype=np.float64),
            np.ascontiguousarray(xi, dtype=np.int64),
            np.ascontiguousarray(yi, dtype=np.int64),
            lo_count,
            hi_start,
            d,
        )
else:
    midranks_kernel = _midranks_numpy
    rank_sums_kernel = _rank_sums_numpy
    bootstrap_effects_kernel = _bootstrap_effects_numpy


def set_threads(n: int | None) -> None:
    """Cap kernel worker threads (no-op on the numpy path)."""
    if n is None or not USING_NUMBA:
        return
    import numba

    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(min(max(1, int(n)), limit))
