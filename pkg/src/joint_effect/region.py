"""Geometry of the feasible set of (theta, i2) pairs.

The attainable pairs form the triangle A = {(t, y): 0 <= y <= min(2t, 2-2t)}.
`uniform_pair_for` inverts the map constructively: it returns (a, b) such that
F = U[0,1], G = U[a,b] realizes a requested interior pair. All four subarea
inversions are closed-form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyRegionError, ParameterError

__all__ = ["Rectangle", "UniformPair", "in_region", "envelope", "clip_to_region", "uniform_pair_for"]


@dataclass(frozen=True)
class Rectangle:
    theta_lo: float
    theta_hi: float
    i2_lo: float
    i2_hi: float

    def __post_init__(self):
        if self.theta_lo > self.theta_hi or self.i2_lo > self.i2_hi:
            raise ParameterError("rectangle bounds out of order")


@dataclass(frozen=True)
class UniformPair:
    """G = U[a, b] paired against F = U[0, 1]."""

    a: float
    b: float


def envelope(theta: float) -> float:
    """Upper boundary of A at a given theta."""
    return max(0.0, min(2.0 * theta, 2.0 - 2.0 * theta))


def in_region(theta: float, i2: float, atol: float = 0.0) -> bool:
    return (-atol <= theta <= 1.0 + atol) and (-atol <= i2 <= envelope(theta) + atol)


def clip_to_region(rect: Rectangle) -> tuple[Rectangle, bool]:
    """Bounding box of (rect ∩ A), with a flag marking whether clipping occurred.

    Raises EmptyRegionError when the rectangle misses A entirely.
    """
    i2_lo = max(rect.i2_lo, 0.0)
    # theta values admitting some i2 >= i2_lo inside A: envelope(theta) >= i2_lo
    t_lo = max(rect.theta_lo, 0.0, i2_lo / 2.0)
    t_hi = min(rect.theta_hi, 1.0, 1.0 - i2_lo / 2.0)
    if t_lo > t_hi:
        raise EmptyRegionError("confidence rectangle does not intersect the feasible region")
    if t_lo <= 0.5 <= t_hi:
        env_max = 1.0
    elif t_hi < 0.5:
        env_max = envelope(t_hi)
    else:
        env_max = envelope(t_lo)
    i2_hi = min(rect.i2_hi, env_max)
    if i2_lo > i2_hi:
        raise EmptyRegionError("confidence rectangle does not intersect the feasible region")
    clipped = Rectangle(t_lo, t_hi, i2_lo, i2_hi)
    return clipped, clipped != rect


def _a4_curve(theta: float) -> float:
    """Lower boundary of the closed-form subarea (b -> 1 limit curve)."""
    if theta <= 0.5:
        return (-4.0 * theta * theta + 4.0 * theta - 0.5) / (2.0 * theta)
    return (-4.0 * theta * theta + 4.0 * theta - 0.5) / (2.0 - 2.0 * theta)


def _invert_wedge(theta: float, i2: float) -> tuple[float, float]:
    """Subarea with a in [0, 0.5], b > 1: fixed-incline line through the origin."""
    r = i2 / theta
    a = (r - math.sqrt(2.0 - r)) / (r + 2.0)
    b = a + (0.5 * a * a - a + 0.5) / theta
    return a, b


def uniform_pair_for(theta: float, i2: float) -> UniformPair:
    """Return (a, b) with F = U[0,1], G = U[a,b] realizing an interior pair.

    theta is P(X < Y) for X ~ F, Y ~ G and i2 the overlap of G with respect
    to F, matching the oracle's conventions. The construction solves the case
    formulas in t = 1 - theta = E[G(X)]: the central diamond has a direct
    quadratic inverse, the two wedges use the incline construction (one via
    the reflection t -> 1-t, (a,b) -> (1-b, 1-a)), and the bottom region the
    explicit line family a < 0 < 1 < b.
    """
    if not (0.0 < theta < 1.0 and 0.0 < i2 < envelope(theta)):
        raise ParameterError(f"({theta}, {i2}) is not in the interior of the feasible region")
    t = 1.0 - theta
    if 0.25 <= t <= 0.75 and i2 >= _a4_curve(t):
        disc = 4.0 * t * (1.0 - t) + i2 * (i2 - 2.0)
        root = math.sqrt(max(disc, 0.0))
        a = 0.5 * (-2.0 * t + i2 + 1.0 - root)
        b = 2.0 - a - 2.0 * t
        return UniformPair(a, b)
    if t <= 0.5 and i2 >= t:
        a, b = _invert_wedge(t, i2)
        return UniformPair(a, b)
    if t >= 0.5 and i2 >= 1.0 - t:
        a, b = _invert_wedge(1.0 - t, i2)
        return UniformPair(1.0 - b, 1.0 - a)
    # remaining: i2 < min(t, 1 - t); line family with incline 1/(1-2a)
    a = 0.5 * (1.0 - t / i2)
    b = a + 0.5 / i2
    return UniformPair(a, b)
