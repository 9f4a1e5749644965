"""Numerical ground truth for known distribution pairs.

Computes the exact relative effect P(X < Y), both overlap indices, the joint
asymptotic covariance of the estimator pair on the sqrt(n) scale, and the
normal-vs-normal functional grid. Everything is adaptive Gauss-Kronrod
quadrature over the unit interval through the quantile transform.

Orientation note: the relative effect here is always P(X < Y) for X ~ f,
Y ~ g (the population value of theta_hat); the overlap index i2 is the
overlap of g with respect to f (the population value of i2_hat, which splits
the x-sample at its median).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._quad import integrate_unit
from .distributions import DistributionSpec, cdf, normal, quantile
from .errors import ParameterError

__all__ = [
    "ExactFunctionals",
    "AsymptoticCov",
    "exact_theta",
    "exact_i1",
    "exact_i2",
    "exact_functionals",
    "asymptotic_cov",
    "functional_grid",
]


@dataclass(frozen=True)
class ExactFunctionals:
    theta: float
    i1: float
    i2: float
    theta_err: float
    i1_err: float
    i2_err: float


@dataclass(frozen=True)
class AsymptoticCov:
    """Covariance of sqrt(n) * (theta_hat - theta, i2_hat - i2) as n/m -> nu."""

    var_theta: float
    var_i2: float
    cov: float
    nu: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.var_theta, self.cov], [self.cov, self.var_i2]])


def _finite_edges(d: DistributionSpec) -> list[float]:
    import math

    return [e for e in d.support() if math.isfinite(e)]


def _theta_quad(f: DistributionSpec, g: DistributionSpec, tol: float):
    # P(X < Y) = int_0^1 F(G^{-1}(t)) dt for continuous F, G; the integrand
    # kinks where G^{-1}(t) crosses a support edge of F
    pts = [0.25, 0.5, 0.75]
    pts += [float(cdf(g, e)) for e in _finite_edges(f)]
    return integrate_unit(lambda t: cdf(f, quantile(g, t)), tol=tol, points=pts)


def _i2_quad(f: DistributionSpec, g: DistributionSpec, tol: float):
    # kinks where F^{-1}(t/2) or F^{-1}(1 - t/2) crosses a support edge of G
    pts = [0.25, 0.5, 0.75]
    for e in _finite_edges(g):
        fe = float(cdf(f, e))
        pts += [2.0 * fe, 2.0 - 2.0 * fe]

    def integrand(t):
        return cdf(g, quantile(f, 1.0 - t / 2.0)) - cdf(g, quantile(f, t / 2.0))

    return integrate_unit(integrand, tol=tol, points=pts)


def exact_theta(f: DistributionSpec, g: DistributionSpec, tol: float = 1e-8) -> float:
    """Exact relative effect P(X < Y), absolute error below max(tol, 1e-6)."""
    return _theta_quad(f, g, tol).value


def exact_i2(f: DistributionSpec, g: DistributionSpec, tol: float = 1e-8) -> float:
    """Exact overlap index of g with respect to f."""
    return _i2_quad(f, g, tol).value


def exact_i1(f: DistributionSpec, g: DistributionSpec, tol: float = 1e-8) -> float:
    """Exact overlap index of f with respect to g (role swap)."""
    return _i2_quad(g, f, tol).value


def exact_functionals(f: DistributionSpec, g: DistributionSpec, tol: float = 1e-8) -> ExactFunctionals:
    th = _theta_quad(f, g, tol)
    i2 = _i2_quad(f, g, tol)
    i1 = _i2_quad(g, f, tol)
    return ExactFunctionals(th.value, i1.value, i2.value, th.error, i1.error, i2.error)


def asymptotic_cov(f: DistributionSpec, g: DistributionSpec, nu: float, tol: float = 1e-9) -> AsymptoticCov:
    """Joint asymptotic covariance of (theta_hat, i2_hat) on the sqrt(n) scale.

    Derived from the two-bridge representation of the empirical ROC process.
    With r = G o F^{-1} and u = F o G^{-1}, the contribution of the y-sample
    (weight nu) runs through u and the folded map 2*min(u, 1-u); the x-sample
    contribution runs through r and 2*|r - r(1/2)|, whose kink at the median
    of F does not simplify to a composition with conditional quantiles unless
    the medians coincide. Under F = G this reduces to variance
    (nu + 1)/12 and zero covariance.
    """
    if nu <= 0:
        raise ParameterError("nu must be positive")
    r = lambda t: cdf(g, quantile(f, t))
    u = lambda v: cdf(f, quantile(g, v))
    rm = float(cdf(g, quantile(f, 0.5)))  # r at the median of F
    um = float(cdf(f, quantile(g, 0.5)))  # u at the median of G
    w = lambda v: 2.0 * np.minimum(u(v), 1.0 - u(v))
    lam = lambda t: 2.0 * np.abs(r(t) - rm)

    def moments(h, pts):
        m1 = integrate_unit(h, tol=tol, points=pts).value
        m2 = integrate_unit(lambda t: h(t) ** 2, tol=tol, points=pts).value
        return m1, m2

    pu = [0.25, 0.5, 0.75, rm] + [float(cdf(g, e)) for e in _finite_edges(f)]
    pr = [0.25, 0.5, 0.75, um] + [float(cdf(f, e)) for e in _finite_edges(g)]
    u1, u2 = moments(u, pu)
    r1, r2 = moments(r, pr)
    w1, w2 = moments(w, pu)
    l1, l2 = moments(lam, pr)
    uw = integrate_unit(lambda v: u(v) * w(v), tol=tol, points=pu).value
    rl = integrate_unit(lambda t: r(t) * lam(t), tol=tol, points=pr).value

    var_theta = nu * (u2 - u1 * u1) + (r2 - r1 * r1)
    var_i2 = nu * (w2 - w1 * w1) + (l2 - l1 * l1)
    cov = nu * (uw - u1 * w1) - (rl - r1 * l1)
    return AsymptoticCov(var_theta, var_i2, cov, nu)


def functional_grid(
    mu_values, sigma_values, tol: float = 1e-8
) -> list[tuple[float, float, float, float, float]]:
    """Rows (mu, sigma, theta, i1, i2) for X ~ N(0,1) against Y ~ N(mu, sigma).

    The theta = 1/2 contour is the vertical line mu = 0; the overlap index
    moves with sigma alone there, which is the point of the joint approach.
    """
    base = normal(0.0, 1.0)
    rows = []
    for mu in np.asarray(mu_values, dtype=float):
        for sd in np.asarray(sigma_values, dtype=float):
            if sd <= 0:
                raise ParameterError("sigma grid must be positive")
            other = normal(float(mu), float(sd))
            fx = exact_functionals(base, other, tol=tol)
            rows.append((float(mu), float(sd), fx.theta, fx.i1, fx.i2))
    return rows


def grid_axis(spec: tuple[float, float, int]) -> np.ndarray:
    lo, hi, steps = spec
    if steps < 1 or hi < lo:
        raise ParameterError("grid axis must be LO:HI:STEPS with STEPS >= 1 and HI >= LO")
    return np.linspace(lo, hi, int(steps))
