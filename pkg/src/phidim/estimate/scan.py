"""Admissible-pair scanning and the curve-based dimension estimators.

A record is one admissible triple (z, R, r) with certified ratio bounds
X_lo <= mu(B(z,R))/mu(B(z,r)) <= X_hi taken from the oracle enclosures.
Upper estimates maximize log X_lo / log(R/r) (never overclaiming), lower
estimates minimize log X_hi / log(R/r).  The per-fine-depth extrema form the
estimate's curve; the reported value is the entry at the finest depth, and
extrapolation past the grid is deliberately not attempted.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from ..dimfunc import ScaleFunction
from ..enclosure import EmptyBallError, PrecisionError
from .config import (
    ConfigurationError,
    EstimationConfig,
    alpha_ratio,
    first_admissible_fine_depth,
    log_scale_gap,
    scale_pair_admissible,
)

_EMPTY = ("empty",)


@dataclass(frozen=True)
class PairRecord:
    z: object
    R: Fraction
    r: Fraction
    coarse_depth: int
    fine_depth: int
    log_x_lo: float | None
    log_x_hi: float | None
    log_gap: float

    @property
    def x_lo(self) -> float:
        return math.exp(self.log_x_lo) if self.log_x_lo is not None else math.nan

    @property
    def x_hi(self) -> float:
        return math.exp(self.log_x_hi) if self.log_x_hi is not None else math.nan


@dataclass(frozen=True)
class ScanStats:
    pair_count: int
    dropped_empty: int
    dropped_uncertified: int
    dropped_mass_floor: int

    @property
    def dropped_total(self) -> int:
        return self.dropped_empty + self.dropped_uncertified + self.dropped_mass_floor


@dataclass(frozen=True)
class DimensionEstimate:
    direction: str
    value: float
    curve: tuple  # ((fine_depth, alpha), ...) ascending in depth
    diverging: bool
    witness: tuple | None  # (z, R, r) as floats
    witness_exact: tuple | None
    pair_count: int
    dropped_pairs: int

    def curve_dict(self) -> dict:
        return dict(self.curve)


class BallCache:
    """Memoized (z, radius) -> (log_lo, log_hi) or an empty marker.

    Shareable across estimator calls on the same spec; ball queries are pure
    so duplicated computation under threads is harmless.
    """

    def __init__(self) -> None:
        self._store: dict = {}

    def log_bounds(self, spec, z, radius):
        key = (z, radius)
        hit = self._store.get(key)
        if hit is None:
            try:
                enc = spec.ball_measure(z, radius)
                hit = (enc.log_lo, enc.log_hi)
            except EmptyBallError:
                hit = _EMPTY
            self._store[key] = hit
        return hit


def _support_diameter_cap(spec):
    lo, hi = spec.support_bounds()
    diam = hi - lo
    if diam > 0:
        return diam / 2
    return Fraction(1, 2)


def _scale_grids(spec, cfg: EstimationConfig):
    """(coarse list, fine list) of (depth key, exact scale), coarse-first."""
    if cfg.explicit_R is not None:
        coarse = list(enumerate(sorted(cfg.explicit_R, reverse=True)))
        fine = list(enumerate(sorted(cfg.explicit_r, reverse=True)))
        return coarse, fine
    cap = _support_diameter_cap(spec)
    coarse = []
    fine = []
    for i in range(cfg.n_min, cfg.n_max + 1):
        s = Fraction(1, cfg.base**i)
        if s <= cap:
            coarse.append((i, s))
        fine.append((i, s))
    return coarse, fine


def _scan_centers(spec, cfg: EstimationConfig) -> list:
    if cfg.centers is not None:
        pool = list(cfg.centers)
    else:
        res = Fraction(1, cfg.base**cfg.resolved_net_level)
        pool = list(spec.support_net(res))
        pool.extend(spec.hint_centers(Fraction(1, cfg.base**cfg.n_max)))
    return sorted(set(pool))


def _records_for_center(spec, phi, cfg, cache, z, coarse, fine, explicit):
    lam = None if explicit else cfg.lambda_min
    records = []
    empty = 0
    uncertified = 0
    floored = 0
    for i, R in coarse:
        R_ball = cache.log_bounds(spec, z, R)
        admissible = []
        for j, r in fine:
            if scale_pair_admissible(R, r, phi, lam):
                admissible.append((j, r))
        if cfg.scan_mode == "boundary":
            admissible = admissible[:1]
        for j, r in admissible:
            if R_ball is _EMPTY:
                empty += 1
                continue
            r_ball = cache.log_bounds(spec, z, r)
            if r_ball is _EMPTY:
                empty += 1
                continue
            if r_ball[1] < cfg.min_log_mass:
                floored += 1
                continue
            log_x_lo = R_ball[0] - r_ball[1] if R_ball[0] > -math.inf else None
            log_x_hi = R_ball[1] - r_ball[0] if r_ball[0] > -math.inf else None
            if log_x_lo is None and log_x_hi is None:
                uncertified += 1
                continue
            records.append(
                PairRecord(
                    z=z,
                    R=R,
                    r=r,
                    coarse_depth=i,
                    fine_depth=j,
                    log_x_lo=log_x_lo,
                    log_x_hi=log_x_hi,
                    log_gap=log_scale_gap(R, r),
                )
            )
    return records, empty, uncertified, floored


def scan_admissible_pairs(
    spec, phi: ScaleFunction, cfg: EstimationConfig, cache: BallCache | None = None
) -> tuple[list, ScanStats]:
    """Evaluate every admissible (z, R, r) triple; returns records + stats.

    Raises ConfigurationError naming the first admissible fine depth when the
    depth range admits no pair at all.
    """
    if cache is None:
        cache = BallCache()
    explicit = cfg.explicit_R is not None
    coarse, fine = _scale_grids(spec, cfg)
    centers = _scan_centers(spec, cfg)
    if not centers:
        raise ConfigurationError("support net produced no candidate centers")

    work = [(z,) for z in centers]
    if cfg.threads > 1 and len(centers) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(
                pool.map(
                    lambda zz: _records_for_center(
                        spec, phi, cfg, cache, zz[0], coarse, fine, explicit
                    ),
                    work,
                )
            )
    else:
        parts = [
            _records_for_center(spec, phi, cfg, cache, z, coarse, fine, explicit)
            for (z,) in work
        ]

    records: list = []
    empty = uncertified = floored = 0
    for recs, e, u, f in parts:
        records.extend(recs)
        empty += e
        uncertified += u
        floored += f
    if not records and empty == 0 and uncertified == 0 and floored == 0:
        i0 = cfg.n_min if not explicit else 0
        if explicit:
            raise ConfigurationError("explicit grids admit no (R, r) pair")
        j0 = first_admissible_fine_depth(phi, cfg, i0)
        raise ConfigurationError(
            "depth range admits no scale pair: first admissible pair is "
            f"R = {cfg.base}^-{i0}, r = {cfg.base}^-{j0}; raise n_max to at least {j0}"
        )
    stats = ScanStats(
        pair_count=len(records),
        dropped_empty=empty,
        dropped_uncertified=uncertified,
        dropped_mass_floor=floored,
    )
    return records, stats


def _witness_key(rec: PairRecord):
    return (float(rec.z), rec.coarse_depth, rec.fine_depth)


def _curve_extrema(records, want_upper: bool):
    """Per-fine-depth extremal alpha with deterministic tie-breaking."""
    best: dict = {}
    skipped = 0
    for rec in records:
        log_x = rec.log_x_lo if want_upper else rec.log_x_hi
        if log_x is None:
            skipped += 1
            continue
        a = alpha_ratio(log_x, rec.log_gap)
        cur = best.get(rec.fine_depth)
        if cur is None:
            best[rec.fine_depth] = (a, rec)
            continue
        better = a > cur[0] if want_upper else a < cur[0]
        if better or (a == cur[0] and _witness_key(rec) < _witness_key(cur[1])):
            best[rec.fine_depth] = (a, rec)
    return best, skipped


def _divergence(curve: dict, threshold: float) -> bool:
    ks = sorted(curve)
    if len(ks) < 2:
        return False
    j_end = ks[-1]
    target = j_end / 2
    j_mid = min(ks[:-1], key=lambda k: (abs(k - target), k))
    return curve[j_end][0] - curve[j_mid][0] >= threshold


def assemble_estimate(
    direction: str, records, stats: ScanStats, cfg: EstimationConfig
) -> DimensionEstimate:
    """Reduce scanned pair records to a single directional estimate."""
    want_upper = direction == "upper"
    best, skipped = _curve_extrema(records, want_upper)
    if not best:
        raise PrecisionError(
            f"no pair certified a {direction} ratio bound "
            f"({stats.dropped_total + skipped} pairs dropped)"
        )
    ks = sorted(best)
    curve = tuple((k, best[k][0]) for k in ks)
    value, wit = best[ks[-1]]
    diverging = want_upper and _divergence(best, cfg.divergence_threshold)
    return DimensionEstimate(
        direction=direction,
        value=value,
        curve=curve,
        diverging=diverging,
        witness=(float(wit.z), float(wit.R), float(wit.r)),
        witness_exact=(wit.z, wit.R, wit.r),
        pair_count=stats.pair_count,
        dropped_pairs=stats.dropped_total + skipped,
    )


def estimate_upper_phi_dim(
    spec, phi: ScaleFunction, cfg: EstimationConfig, cache: BallCache | None = None
) -> DimensionEstimate:
    records, stats = scan_admissible_pairs(spec, phi, cfg, cache)
    return assemble_estimate("upper", records, stats, cfg)


def estimate_lower_phi_dim(
    spec, phi: ScaleFunction, cfg: EstimationConfig, cache: BallCache | None = None
) -> DimensionEstimate:
    records, stats = scan_admissible_pairs(spec, phi, cfg, cache)
    return assemble_estimate("lower", records, stats, cfg)


@dataclass(frozen=True)
class SpectrumRow:
    theta: float | None  # None marks the flat-function (Assouad proxy) row
    upper: DimensionEstimate
    lower: DimensionEstimate


@dataclass(frozen=True)
class SpectrumReport:
    rows: tuple
    trend_increasing: bool
    qa_proxy: float

    def row(self, theta) -> SpectrumRow:
        for row in self.rows:
            if row.theta == theta:
                return row
        raise KeyError(theta)


def estimate_spectrum(spec, thetas, cfg: EstimationConfig) -> SpectrumReport:
    """Upper/lower estimates along the theta ladder plus the flat-function
    row; the trend across increasing theta is the quasi-Assouad proxy."""
    thetas = list(thetas)
    if any(not 0 < t < 1 for t in thetas):
        raise ConfigurationError("theta values must lie in (0, 1)")
    if sorted(thetas) != thetas:
        raise ConfigurationError("theta values must be increasing")
    cache = BallCache()
    rows = [
        SpectrumRow(
            theta=None,
            upper=estimate_upper_phi_dim(
                spec, ScaleFunction(kind="constant", delta=0.0), cfg, cache
            ),
            lower=estimate_lower_phi_dim(
                spec, ScaleFunction(kind="constant", delta=0.0), cfg, cache
            ),
        )
    ]
    for t in thetas:
        phi = ScaleFunction(kind="theta", theta=t)
        rows.append(
            SpectrumRow(
                theta=t,
                upper=estimate_upper_phi_dim(spec, phi, cfg, cache),
                lower=estimate_lower_phi_dim(spec, phi, cfg, cache),
            )
        )
    theta_rows = rows[1:]
    increasing = all(
        b.upper.value > a.upper.value + 1e-9 for a, b in zip(theta_rows, theta_rows[1:])
    )
    qa_proxy = theta_rows[-1].upper.value if theta_rows else math.nan
    return SpectrumReport(rows=tuple(rows), trend_increasing=increasing, qa_proxy=qa_proxy)
