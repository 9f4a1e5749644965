"""Midranks, pooled ranking and the joint-median sample split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import midranks_kernel
from .errors import DataError, DegenerateSplitError

GROUP_X = 0
GROUP_Y = 1


@dataclass(frozen=True)
class RankedPool:
    """Pooled two-sample data, sorted ascending, with group labels and midranks."""

    values: np.ndarray
    group: np.ndarray  # GROUP_X / GROUP_Y, parallel to values
    midrank: np.ndarray
    n: int  # size of the X sample
    m: int  # size of the Y sample


@dataclass(frozen=True)
class SplitSamples:
    """Both samples split at the joint median of the pooled data."""

    joint_median: float
    x_below: np.ndarray
    x_above: np.ndarray
    y_below: np.ndarray
    y_above: np.ndarray

    @property
    def k(self) -> int:
        return len(self.x_below)

    @property
    def l(self) -> int:
        return len(self.y_below)


def _as_sample(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float).ravel()
    if arr.size == 0:
        raise DataError(f"{name} sample must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} sample contains non-finite values")
    return arr


def midranks(values) -> np.ndarray:
    """Midrank of each element: (# strictly smaller) + (# equal + 1) / 2."""
    arr = _as_sample(values, "input")
    return midranks_kernel(arr)


def pool_and_rank(x, y) -> RankedPool:
    """Pool two samples, sort ascending (X before Y within ties) and midrank."""
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    values = np.concatenate([xa, ya])
    group = np.concatenate([np.zeros(len(xa), dtype=np.int8), np.ones(len(ya), dtype=np.int8)])
    order = np.argsort(values, kind="stable")
    values = values[order]
    group = group[order]
    return RankedPool(values, group, midranks_kernel(values), n=len(xa), m=len(ya))


def split_at_joint_median(x, y) -> SplitSamples:
    """Split both samples at the lower empirical median of the pooled data.

    Values strictly below the median go below, strictly above go above. Per
    group, t copies tied with the median split as ceil(t/2) below and the rest
    above (the odd leftover goes below), which keeps k + l in
    {floor(N/2), ceil(N/2)} when only the median itself sits on the cut.
    """
    xa = np.sort(_as_sample(x, "x"))
    ya = np.sort(_as_sample(y, "y"))
    n, m = len(xa), len(ya)
    if n < 4 or m < 4:
        raise DegenerateSplitError("need at least 4 observations per sample to split")
    pooled = np.sort(np.concatenate([xa, ya]))
    median = float(pooled[int(np.ceil((n + m) / 2)) - 1])

    def split(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        below = v[v < median]
        above = v[v > median]
        t = int(np.count_nonzero(v == median))
        down = (t + 1) // 2
        below = np.concatenate([below, np.full(down, median)])
        above = np.concatenate([np.full(t - down, median), above])
        return below, above

    xb, xat = split(xa)
    yb, yat = split(ya)
    parts = {"x_below": xb, "x_above": xat, "y_below": yb, "y_above": yat}
    for name, part in parts.items():
        if len(part) < 2:
            raise DegenerateSplitError(
                f"{name} has {len(part)} observation(s); the adjusted test needs >= 2 per part"
            )
    return SplitSamples(median, xb, xat, yb, yat)
