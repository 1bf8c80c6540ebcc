"""Covering counts for point sets and the set-dimension estimator.

Covering numbers on the line are computed by the left-to-right greedy sweep,
which is exactly optimal in one dimension: place each ball to cover the
leftmost uncovered point and extend as far right as possible.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from ..dimfunc import ScaleFunction
from ..enclosure import exact_log
from .config import (
    ConfigurationError,
    EstimationConfig,
    alpha_ratio,
    first_admissible_fine_depth,
    log_scale_gap,
    scale_pair_admissible,
)
from .scan import DimensionEstimate, ScanStats, _divergence, _scale_grids, _scan_centers, _witness_key


def covering_number(points, window, r) -> int:
    """Minimal number of radius-r balls covering points inside the window.

    ``points`` must be sorted ascending; the window is a closed interval.
    Exact scalar arithmetic throughout, so ties at ball edges are decided
    correctly (a ball of radius r centered at c covers the closed [c-r, c+r]).
    """
    lo, hi = window
    if not r > 0:
        raise ValueError("radius must be positive")
    # points is sorted, so only the slice inside the window matters
    start = bisect.bisect_left(points, lo)
    count = 0
    reach = None
    for idx in range(start, len(points)):
        p = points[idx]
        if p > hi:
            break
        if reach is None or p > reach:
            count += 1
            reach = p + 2 * r
    return count


@dataclass(frozen=True)
class _SetRecord:
    z: object
    R: Fraction
    r: Fraction
    coarse_depth: int
    fine_depth: int
    count: int
    log_gap: float


def estimate_set_phi_dim(
    spec, phi: ScaleFunction, cfg: EstimationConfig, direction: str = "upper"
) -> DimensionEstimate:
    """Extremal log N_r(B(z,R) cap E) / log(R/r) over admissible pairs.

    E is the spec's support, discretized once at an eighth of the finest
    scale so that every covering count at the scanned radii is faithful.
    """
    if direction not in ("upper", "lower"):
        raise ValueError("direction must be upper or lower")
    finest = Fraction(1, cfg.base**cfg.n_max)
    points = sorted(spec.support_net(finest / 8))
    centers = _scan_centers(spec, cfg)
    coarse, fine = _scale_grids(spec, cfg)
    explicit = cfg.explicit_R is not None
    lam = None if explicit else cfg.lambda_min

    want_upper = direction == "upper"
    best: dict = {}
    pair_count = 0
    for z in centers:
        for i, R in coarse:
            for j, r in fine:
                if not scale_pair_admissible(R, r, phi, lam):
                    continue
                n = covering_number(points, (z - R, z + R), r)
                if n == 0:
                    continue
                pair_count += 1
                a = alpha_ratio(exact_log(n), log_scale_gap(R, r))
                rec = _SetRecord(
                    z=z, R=R, r=r, coarse_depth=i, fine_depth=j, count=n,
                    log_gap=log_scale_gap(R, r),
                )
                cur = best.get(j)
                if cur is None:
                    best[j] = (a, rec)
                    continue
                better = a > cur[0] if want_upper else a < cur[0]
                if better or (a == cur[0] and _witness_key(rec) < _witness_key(cur[1])):
                    best[j] = (a, rec)
    if not best:
        i0 = cfg.n_min
        j0 = first_admissible_fine_depth(phi, cfg, i0)
        raise ConfigurationError(
            "no admissible covering pair: first admissible pair is "
            f"R = {cfg.base}^-{i0}, r = {cfg.base}^-{j0}"
        )
    ks = sorted(best)
    curve = tuple((k, best[k][0]) for k in ks)
    value, wit = best[ks[-1]]
    stats = ScanStats(pair_count, 0, 0, 0)
    return DimensionEstimate(
        direction=direction,
        value=value,
        curve=curve,
        diverging=want_upper and _divergence(best, cfg.divergence_threshold),
        witness=(float(wit.z), float(wit.R), float(wit.r)),
        witness_exact=(wit.z, wit.R, wit.r),
        pair_count=stats.pair_count,
        dropped_pairs=0,
    )
