"""Bivariate normal rectangle probability and equicoordinate quantiles."""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from ._quad import integrate
from .errors import ParameterError


def _phi(z):
    return np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _Phi(z):
    return 0.5 * special.erfc(-z / math.sqrt(2.0))


def bvn_rect(c: float, rho: float) -> float:
    """P(|Z1| <= c, |Z2| <= c) for standard bivariate normal correlation rho.

    One-dimensional adaptive quadrature of the conditional normal cdf;
    absolute error well below 1e-7. Symmetric in the sign of rho.
    """
    if c <= 0:
        return 0.0
    if not -1.0 < rho < 1.0:
        if abs(rho) == 1.0:
            return float(2.0 * _Phi(c) - 1.0)
        raise ParameterError("correlation must lie in [-1, 1]")
    if abs(rho) >= 1.0 - 1e-12:
        return float(2.0 * _Phi(c) - 1.0)
    s = math.sqrt(1.0 - rho * rho)

    def integrand(z):
        return _phi(z) * (_Phi((c - rho * z) / s) - _Phi((-c - rho * z) / s))

    return min(1.0, integrate(integrand, -c, c, tol=1e-10, points=(0.0,)).value)


def equicoordinate_quantile(level: float, rho: float) -> float:
    """The c with P(|Z1| <= c, |Z2| <= c) = level, by bisection in c."""
    if not 0.0 < level < 1.0:
        raise ParameterError("level must be in (0, 1)")
    lo, hi = 0.0, 1.0
    while bvn_rect(hi, rho) < level:
        hi *= 2.0
        if hi > 64:
            raise ParameterError("equicoordinate quantile out of range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bvn_rect(mid, rho) < level:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * (1.0 + hi):
            break
    return 0.5 * (lo + hi)
