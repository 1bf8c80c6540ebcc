"""Global envelope exponents: Minkowski-side and Frostman-side estimates.

At each grid radius the scan records the smallest and largest ball measures
over the probed centers.  The slowest-growing envelope (the minimum) carries
the Minkowski-side exponent, the fastest (the maximum) the Frostman-side one;
slopes come from a least-squares fit of log envelope against log radius using
enclosure log-midpoints, which is symmetric and adequate for the tolerance
bands these feed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..enclosure import EmptyBallError
from .config import EstimationConfig
from .scan import _scan_centers, _support_diameter_cap


@dataclass(frozen=True)
class BoxDimensions:
    minkowski: float
    frostman: float
    radii: tuple  # floats, coarse to fine
    min_envelope: tuple  # log of smallest ball per radius
    max_envelope: tuple  # log of largest ball per radius


def _ls_slope(xs, ys) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    den = sum((x - mx) ** 2 for x in xs)
    if den == 0:
        return math.nan
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / den


def estimate_minkowski_frostman(spec, cfg: EstimationConfig) -> BoxDimensions:
    """(Minkowski-side, Frostman-side) exponent estimates from ball envelopes."""
    centers = _scan_centers(spec, cfg)
    cap = _support_diameter_cap(spec)
    radii = []
    for k in range(cfg.n_min, cfg.n_max + 1):
        s = Fraction(1, cfg.base**k)
        if s <= cap:
            radii.append(s)
    if len(radii) < 2:
        raise ValueError("need at least two radii below the support cap")
    log_r = []
    env_min = []
    env_max = []
    for s in radii:
        lo_best = math.inf
        hi_best = -math.inf
        for z in centers:
            try:
                enc = spec.ball_measure(z, s)
            except EmptyBallError:
                continue
            mid = enc.log_midpoint
            if mid < lo_best:
                lo_best = mid
            if mid > hi_best:
                hi_best = mid
        if lo_best == math.inf:
            continue
        log_r.append(math.log(float(s)))
        env_min.append(lo_best)
        env_max.append(hi_best)
    if len(log_r) < 2:
        raise ValueError("every probed ball was empty; centers miss the support")
    dim_m = _ls_slope(log_r, env_min)
    dim_f = _ls_slope(log_r, env_max)
    return BoxDimensions(
        minkowski=dim_m,
        frostman=dim_f,
        radii=tuple(math.exp(x) for x in log_r),
        min_envelope=tuple(env_min),
        max_envelope=tuple(env_max),
    )
