"""Shared fixtures and independent reference oracles.

The oracles here recompute quantities definitionally (pairwise counts, ECDF
composition, O(N^2) ranking) so the fast rank-form implementations are tested
against routes they do not share code with.
"""

import numpy as np
import pytest

# achievement scores for two classes of ten students each
CLASS1 = [7.0, 4.0, 4.0, 5.0, 4.0, 6.0, 6.0, 4.0, 3.0, 7.0]
CLASS2 = [3.0, 6.0, 7.0, 9.0, 3.0, 2.0, 4.0, 8.0, 2.0, 6.0]


@pytest.fixture
def education():
    return np.array(CLASS1), np.array(CLASS2)


def midranks_brute(values) -> np.ndarray:
    """O(N^2) definitional midranks: (# smaller) + (# equal + 1)/2."""
    v = np.asarray(values, dtype=float)
    out = np.empty(len(v))
    for i, vi in enumerate(v):
        smaller = np.sum(v < vi)
        equal = np.sum(v == vi)
        out[i] = smaller + (equal + 1) / 2.0
    return out


def theta_brute(x, y) -> float:
    """O(nm) pairwise count of wins plus half-ties, single final division."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    wins = int(np.sum(x[:, None] < y[None, :]))
    ties = int(np.sum(x[:, None] == y[None, :]))
    return (wins + 0.5 * ties) / (len(x) * len(y))


def i2_plugin(x, y) -> float:
    """Plug-in ECDF-composition estimate, integrated exactly with rationals.

    Evaluates int G_hat(F_hat^{-1}(1 - a/2)) da - int G_hat(F_hat^{-1}(a/2)) da
    piece by piece over the step breakpoints using Fraction arithmetic, then
    rounds once to float, so tie-free comparisons against the rank form can
    demand bit equality.
    """
    from fractions import Fraction

    xs = np.sort(np.asarray(x, dtype=float))
    ys = np.sort(np.asarray(y, dtype=float))
    n, m = len(xs), len(ys)

    def ghat(v) -> Fraction:
        return Fraction(int(np.searchsorted(ys, v, side="right")), m)

    one = Fraction(1)
    lower = Fraction(0)
    for i in range(1, n + 1):  # F_hat^{-1}(a/2) = x_(i) on (2(i-1)/n, 2i/n]
        a0 = Fraction(2 * (i - 1), n)
        a1 = min(Fraction(2 * i, n), one)
        if a1 > a0:
            lower += (a1 - a0) * ghat(xs[i - 1])
    upper = Fraction(0)
    for j in range(1, n + 1):  # F_hat^{-1}(1-a/2) = x_(j) iff a in [2-2j/n, 2-2(j-1)/n)
        a0 = max(2 - Fraction(2 * j, n), Fraction(0))
        a1 = min(2 - Fraction(2 * (j - 1), n), one)
        if a1 > a0:
            upper += (a1 - a0) * ghat(xs[j - 1])
    return float(upper - lower)


def ecdf_distance(values, cdf_at) -> float:
    """One-sample Kolmogorov distance between data and a cdf callable."""
    v = np.sort(np.asarray(values, dtype=float))
    n = len(v)
    c = np.asarray(cdf_at(v))
    upper = np.max(np.arange(1, n + 1) / n - c)
    lower = np.max(c - np.arange(0, n) / n)
    return float(max(upper, lower))
