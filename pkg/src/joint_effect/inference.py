"""Hypothesis tests for H0: F = G.

The joint test standardizes (theta_hat, i2_hat) by the shared null variance
(1/12)(1/m + 1/n) and rejects on the larger coordinate; the adjusted joint
test stratifies at the joint median and standardizes by the rank-based
covariance estimator, dropping the absolute-continuity assumption. WMW, KS
and Cramer-von Mises are included as reference tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._bvn import bvn_rect
from ._kernels import midranks_kernel
from .effects import adjusted_effects, theta_i2_hat
from .errors import DataError, DegenerateDataError, ParameterError
from .ranks import SplitSamples, _as_sample, split_at_joint_median

__all__ = [
    "NullCov",
    "AdjustedCov",
    "TestReport",
    "null_covariance",
    "new_joint_test",
    "adjusted_covariance",
    "adjusted_joint_test",
    "wmw_test",
    "ks_test",
    "cvm_test",
]

METHOD_NEW = "new-joint"
METHOD_ADJUSTED = "adjusted-joint"
METHOD_WMW = "wmw"
METHOD_KS = "ks"
METHOD_CVM = "cvm"


@dataclass(frozen=True)
class NullCov:
    """Shared variance of both coordinates under F = G."""

    sigma2: float


@dataclass(frozen=True)
class AdjustedCov:
    """Rank-based covariance estimate for the adjusted statistic pair."""

    s2: float
    s_theta_i2: float
    zero_variance: bool = False

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.s2 / 4.0, self.s_theta_i2], [self.s_theta_i2, self.s2]]
        )

    @property
    def is_psd(self) -> bool:
        return self.s2 * self.s2 / 4.0 - self.s_theta_i2 * self.s_theta_i2 >= 0.0


@dataclass(frozen=True)
class TestReport:
    method: str
    stats: tuple[float, ...]
    p_value: float
    alpha: float
    reject: bool


def _report(method: str, stats, p: float, alpha: float) -> TestReport:
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must be in (0, 1)")
    p = float(min(max(p, 0.0), 1.0))
    return TestReport(method, tuple(float(s) for s in stats), p, alpha, p < alpha)


def null_covariance(n: int, m: int) -> NullCov:
    if n < 1 or m < 1:
        raise ParameterError("sample sizes must be positive")
    return NullCov((1.0 / 12.0) * (1.0 / m + 1.0 / n))


def _std_norm_cdf(z):
    return 0.5 * special.erfc(-z / math.sqrt(2.0))


def new_joint_test(x, y, alpha: float = 0.05, rule: str = "max") -> TestReport:
    """Joint test of F = G via (theta_hat, i2_hat) under the null variance.

    rule="max" uses the equicoordinate p-value 1 - (2*Phi(max|z|) - 1)^2,
    matching the equicoordinate critical values of the simulation study;
    rule="chi2" is the quadratic-form alternative.
    """
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n, m = len(xa), len(ya)
    if n < 2 or m < 2:
        raise DataError("need at least 2 observations per sample")
    pooled = np.concatenate([xa, ya])
    if np.all(pooled == pooled[0]):
        raise DegenerateDataError("all observations identical")
    th, i2 = theta_i2_hat(xa, ya)
    sigma = math.sqrt(null_covariance(n, m).sigma2)
    z1 = (th - 0.5) / sigma
    z2 = (i2 - 0.5) / sigma
    if rule == "max":
        c = max(abs(z1), abs(z2))
        p = 1.0 - (2.0 * _std_norm_cdf(c) - 1.0) ** 2
    elif rule == "chi2":
        p = math.exp(-0.5 * (z1 * z1 + z2 * z2))
    else:
        raise ParameterError(f"unknown rule {rule!r}")
    return _report(METHOD_NEW, (z1, z2), p, alpha)


def _part_variance(xp: np.ndarray, yp: np.ndarray) -> float:
    # Brunner-style rank variance of one sample within one split part:
    # pooled-part midranks minus within-sample midranks, centered.
    k, l = len(xp), len(yp)
    pooled = midranks_kernel(np.concatenate([xp, yp]))[:k]
    within = midranks_kernel(xp)
    dev = pooled - within - pooled.mean() + (k + 1) / 2.0
    return float((dev * dev).sum() / (l * l * (k - 1)))


def adjusted_covariance(s: SplitSamples) -> AdjustedCov:
    """Proposition-1 covariance estimate from a joint-median split."""
    n = len(s.x_below) + len(s.x_above)
    m = len(s.y_below) + len(s.y_above)
    k, l = s.k, s.l
    s2x1 = _part_variance(s.x_below, s.y_below)
    s2y1 = _part_variance(s.y_below, s.x_below)
    s2x2 = _part_variance(s.x_above, s.y_above)
    s2y2 = _part_variance(s.y_above, s.x_above)
    t1 = 0.5 * (l + k) * (s2x1 / k + s2y1 / l)
    t2 = 0.5 * (n + m - l - k) * (s2x2 / (n - k) + s2y2 / (m - l))
    zero = min(s2x1, s2y1, s2x2, s2y2) == 0.0
    return AdjustedCov(s2=t1 + t2, s_theta_i2=t1 - t2, zero_variance=zero)


def adjusted_joint_test(x, y, alpha: float = 0.05) -> TestReport:
    """Median-stratified joint test; valid without absolute continuity.

    The two coordinates are standardized by the diagonal of the adjusted
    covariance; the equicoordinate p-value uses the delta-method correlation
    of the statistic pair, rho = -s_theta_i2 / s2, under which the working
    covariance matrix is positive semidefinite for every input (the two
    stratum terms are nonnegative and sum to s2). Known to be liberal for
    very small samples (n around 10).
    """
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n, m = len(xa), len(ya)
    split = split_at_joint_median(xa, ya)
    cov = adjusted_covariance(split)
    if cov.s2 <= 0.0:
        raise DegenerateDataError("adjusted covariance is identically zero")
    th_adj, i2_adj = adjusted_effects(split)
    root = math.sqrt(n + m)
    s = math.sqrt(cov.s2)
    z1 = root * (th_adj - 0.5) / (s / 2.0)
    z2 = root * (i2_adj - 0.5) / s
    rho = max(-0.999999, min(0.999999, -cov.s_theta_i2 / cov.s2))
    c = max(abs(z1), abs(z2))
    p = 1.0 - bvn_rect(c, rho)
    return _report(METHOD_ADJUSTED, (z1, z2), p, alpha)


def wmw_test(
    x, y, alpha: float = 0.05, continuity: bool = True, tie_correction: bool = True
) -> TestReport:
    """Two-sided Wilcoxon-Mann-Whitney asymptotic test."""
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n, m = len(xa), len(ya)
    if n < 2 or m < 2:
        raise DataError("need at least 2 observations per sample")
    N = n + m
    pooled = np.concatenate([xa, ya])
    ranks = midranks_kernel(pooled)
    u = float(ranks[:n].sum()) - n * (n + 1) / 2.0
    var_u = n * m * (N + 1) / 12.0
    if tie_correction:
        _, counts = np.unique(pooled, return_counts=True)
        var_u -= n * m * float(((counts**3) - counts).sum()) / (12.0 * N * (N - 1))
    if var_u <= 0.0:
        raise DegenerateDataError("all observations tied; WMW variance is zero")
    dev = abs(u - n * m / 2.0)
    if continuity:
        dev = max(dev - 0.5, 0.0)
    z = dev / math.sqrt(var_u)
    p = float(special.erfc(z / math.sqrt(2.0)))  # = 2 * (1 - Phi(z))
    return _report(METHOD_WMW, (z,), p, alpha)


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov


def _ks_statistic(xa: np.ndarray, ya: np.ndarray) -> float:
    xs = np.sort(xa)
    ys = np.sort(ya)
    grid = np.concatenate([xs, ys])
    fx = np.searchsorted(xs, grid, side="right") / len(xs)
    fy = np.searchsorted(ys, grid, side="right") / len(ys)
    return float(np.abs(fx - fy).max())


def _kolmogorov_sf(lam: float) -> float:
    if lam < 1e-8:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += -term if k % 2 == 0 else term
        if term < 1e-17:
            break
    return min(1.0, max(0.0, 2.0 * total))


def _ks_perm_pvalue(xa: np.ndarray, ya: np.ndarray, d_obs: float) -> float:
    """Exact permutation P(D >= d_obs) respecting the pooled tie pattern.

    Counts x-label assignments whose ECDF-difference walk stays strictly
    inside the band |F - G| < d_obs at every distinct pooled value, by dynamic
    programming over tie groups; complement gives the p-value.
    """
    n, m = len(xa), len(ya)
    pooled = np.concatenate([xa, ya])
    _, counts = np.unique(pooled, return_counts=True)
    band = d_obs - 1e-12
    dp = np.zeros(n + 1)
    dp[0] = 1.0
    log_scale = 0.0
    total_assigned = 0
    for c in counts:
        coeffs = special.comb(c, np.arange(c + 1))
        dp = np.convolve(dp, coeffs)[: n + 1]
        total_assigned += int(c)
        a = np.arange(n + 1)
        with np.errstate(invalid="ignore"):
            diff = np.abs(a / n - (total_assigned - a) / m)
        dp[diff >= band] = 0.0
        peak = dp.max()
        if peak > 1e280:
            dp /= peak
            log_scale += math.log(peak)
    if dp[n] <= 0.0:
        return 1.0
    log_inside = math.log(dp[n]) + log_scale
    log_total = (
        special.gammaln(n + m + 1) - special.gammaln(n + 1) - special.gammaln(m + 1)
    )
    return float(min(1.0, max(0.0, 1.0 - math.exp(log_inside - log_total))))


def ks_test(x, y, alpha: float = 0.05, p_method: str = "auto") -> TestReport:
    """Two-sample Kolmogorov-Smirnov test.

    p_method="auto" uses the asymptotic Kolmogorov series on tie-free data and
    the exact tie-pattern permutation distribution when ties are present (the
    asymptotic series is not valid under ties); "asymptotic" and
    "permutation" force one path.
    """
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n, m = len(xa), len(ya)
    if n < 2 or m < 2:
        raise DataError("need at least 2 observations per sample")
    d = _ks_statistic(xa, ya)
    pooled = np.concatenate([xa, ya])
    has_ties = len(np.unique(pooled)) < len(pooled)
    if p_method == "auto":
        p_method = "permutation" if has_ties else "asymptotic"
    if p_method == "asymptotic":
        p = _kolmogorov_sf(math.sqrt(n * m / (n + m)) * d)
    elif p_method == "permutation":
        p = _ks_perm_pvalue(xa, ya, d)
    else:
        raise ParameterError(f"unknown p_method {p_method!r}")
    return _report(METHOD_KS, (d,), p, alpha)


# ---------------------------------------------------------------------------
# Cramer-von Mises


def _cvm_limit_cdf(x: float) -> float:
    """Limiting distribution of the Cramer-von Mises statistic (Bessel series)."""
    if x <= 1e-10:
        return 0.0
    total = 0.0
    for k in range(32):
        z = (4.0 * k + 1.0) ** 2 / (16.0 * x)
        if z > 700.0:
            continue
        ln_coef = special.gammaln(k + 0.5) - special.gammaln(k + 1.0)
        term = math.exp(ln_coef - 2.0 * z) * math.sqrt(4.0 * k + 1.0) * special.kve(0.25, z)
        total += term
        if abs(term) < 1e-16 and k > 2:
            break
    val = total / (math.pi ** 1.5 * math.sqrt(x))
    return min(1.0, max(0.0, val))


def cvm_test(x, y, alpha: float = 0.05) -> TestReport:
    """Two-sample Cramer-von Mises test with the limiting-distribution p-value.

    The rank statistic is normalized to the limiting distribution's first two
    moments (mean 1/6, variance 1/45) before the series cdf is applied, the
    standard finite-sample adjustment.
    """
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n, m = len(xa), len(ya)
    if n < 2 or m < 2:
        raise DataError("need at least 2 observations per sample")
    N = n + m
    ranks = midranks_kernel(np.concatenate([xa, ya]))
    rx = np.sort(ranks[:n])
    ry = np.sort(ranks[n:])
    u = n * float(((rx - np.arange(1, n + 1)) ** 2).sum())
    u += m * float(((ry - np.arange(1, m + 1)) ** 2).sum())
    t = u / (float(n) * m * N) - (4.0 * n * m - 1.0) / (6.0 * N)
    e_t = (1.0 + 1.0 / N) / 6.0
    var_t = (N + 1.0) * (4.0 * m * n * N - 3.0 * (m * m + n * n) - 2.0 * m * n)
    var_t /= 45.0 * N * N * 4.0 * m * n
    t_norm = 1.0 / 6.0 + (t - e_t) / math.sqrt(45.0 * var_t)
    p = 1.0 - _cvm_limit_cdf(t_norm)
    return _report(METHOD_CVM, (t,), p, alpha)
