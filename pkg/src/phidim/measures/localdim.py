"""Pointwise scaling exponent of a measure at a single center."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..enclosure import EmptyBallError
from .base import as_fraction


@dataclass(frozen=True)
class LocalDimensionEstimate:
    lower: float  # min pairwise slope over the scale range
    upper: float  # max pairwise slope
    regression: float  # least-squares slope of log-mass vs log-radius
    levels_used: int


def local_dimension_estimate(
    spec,
    z,
    base: int = 2,
    n_min: int = 2,
    n_max: int = 20,
    lam_min: float = 3.0,
) -> LocalDimensionEstimate:
    """Finite-scale slopes of log mu(B(z, b^-n)) against log b^-n.

    Pairs closer than lam_min in natural-log scale are skipped so that the
    bounded multiplicative constants do not masquerade as slope.  Radii whose
    balls are empty are dropped.
    """
    if n_min < 1 or n_max <= n_min:
        raise ValueError("need 1 <= n_min < n_max")
    z = as_fraction(z) if isinstance(z, (int, float, str, Fraction)) else z
    log_b = math.log(base)
    xs: list[float] = []
    ys: list[float] = []
    for n in range(n_min, n_max + 1):
        try:
            enc = spec.ball_measure(z, Fraction(1, base**n))
        except EmptyBallError:
            continue
        xs.append(-n * log_b)
        ys.append(enc.log_midpoint)
    if len(xs) < 2:
        raise ValueError("not enough nonempty scales to estimate a slope")

    n_pts = len(xs)
    mean_x = sum(xs) / n_pts
    mean_y = sum(ys) / n_pts
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    regression = sxy / sxx

    slopes = [
        (ys[j] - ys[i]) / (xs[j] - xs[i])
        for i in range(n_pts)
        for j in range(i + 1, n_pts)
        if abs(xs[j] - xs[i]) >= lam_min
    ]
    if not slopes:
        slopes = [regression]
    return LocalDimensionEstimate(
        lower=min(slopes), upper=max(slopes), regression=regression, levels_used=n_pts
    )
