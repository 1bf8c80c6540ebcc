"""Exhaustive exact reference estimator for finite atomic measures.

Every ball mass is an exact rational (open-ball atom sum), every admissible
(center, R, r) triple is enumerated with no net, no cache and no sampling,
and the per-depth reduction is shared with the scanning estimator.  Running
the scanner with the config echoed in the result reproduces the same pair
records, so the two agree bit for bit, not merely within tolerance.

Deliberately small: the guards cap work at 10^3 atoms and 10^2 scales per
grid.  This is a test oracle, not a production path.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from ..dimfunc import ScaleFunction
from ..enclosure import exact_log
from ..measures.base import as_fraction
from .config import (
    ConfigurationError,
    EstimationConfig,
    log_scale_gap,
    scale_pair_admissible,
)
from .scan import DimensionEstimate, PairRecord, ScanStats, assemble_estimate

_MAX_ATOMS = 1000
_MAX_SCALES = 100


@dataclass(frozen=True)
class BruteForceResult:
    upper: DimensionEstimate
    lower: DimensionEstimate
    atom_count: int
    pair_count: int
    config: EstimationConfig

    @property
    def witnesses(self) -> tuple:
        return (self.upper.witness_exact, self.lower.witness_exact)


def _extract_atoms(source) -> list[tuple[Fraction, Fraction]]:
    if hasattr(source, "atoms"):
        raw = source.atoms()
    else:
        raw = list(source)
    merged: dict[Fraction, Fraction] = {}
    for pos, mass in raw:
        pos = as_fraction(pos)
        mass = as_fraction(mass)
        if mass <= 0:
            raise ValueError(f"atom at {float(pos)} has non-positive mass")
        merged[pos] = merged.get(pos, Fraction(0)) + mass
    if not merged:
        raise ValueError("no atoms to scan")
    if len(merged) > _MAX_ATOMS:
        raise ValueError(f"brute force is capped at {_MAX_ATOMS} atoms")
    return sorted(merged.items())


def _scale_list(values, name: str) -> list[Fraction]:
    out = sorted((as_fraction(v) for v in values), reverse=True)
    if not out:
        raise ValueError(f"{name} grid is empty")
    if len(out) > _MAX_SCALES:
        raise ValueError(f"brute force is capped at {_MAX_SCALES} scales per grid")
    if out[-1] <= 0:
        raise ValueError(f"{name} grid contains a non-positive scale")
    return out


def exact_ball_mass(
    positions: list[Fraction], prefix: list[Fraction], z: Fraction, radius: Fraction
) -> Fraction:
    """Mass of the open ball (z - radius, z + radius), exactly."""
    lo = bisect.bisect_right(positions, z - radius)
    hi = bisect.bisect_left(positions, z + radius)
    return prefix[hi] - prefix[lo]


def brute_force_reference(
    source,
    phi: ScaleFunction,
    coarse_scales,
    fine_scales,
    divergence_threshold: float = 0.5,
) -> BruteForceResult:
    """Exact upper/lower ratio estimates over explicit scale grids.

    ``source`` is either a measure with an ``atoms()`` method (a truncated
    discrete spec) or an iterable of (position, mass) pairs.  Centers are the
    atom positions themselves.  Explicit grids skip the minimum-gap filter,
    exactly as the scanner does, but never the admissibility inequality.
    """
    atoms = _extract_atoms(source)
    coarse = _scale_list(coarse_scales, "coarse")
    fine = _scale_list(fine_scales, "fine")

    positions = [p for p, _ in atoms]
    prefix = [Fraction(0)]
    for _, mass in atoms:
        prefix.append(prefix[-1] + mass)

    records = []
    for z in positions:
        for i, R in enumerate(coarse):
            for j, r in enumerate(fine):
                if not scale_pair_admissible(R, r, phi, None):
                    continue
                m_big = exact_ball_mass(positions, prefix, z, R)
                m_small = exact_ball_mass(positions, prefix, z, r)
                # centers are atoms, so both balls hold at least the center atom
                log_x = exact_log(m_big) - exact_log(m_small)
                records.append(
                    PairRecord(
                        z=z,
                        R=R,
                        r=r,
                        coarse_depth=i,
                        fine_depth=j,
                        log_x_lo=log_x,
                        log_x_hi=log_x,
                        log_gap=log_scale_gap(R, r),
                    )
                )

    if not records:
        raise ConfigurationError("explicit grids admit no (R, r) pair")
    stats = ScanStats(
        pair_count=len(records),
        dropped_empty=0,
        dropped_uncertified=0,
        dropped_mass_floor=0,
    )
    cfg = EstimationConfig(
        explicit_R=tuple(coarse),
        explicit_r=tuple(fine),
        centers=tuple(positions),
        divergence_threshold=divergence_threshold,
    )
    return BruteForceResult(
        upper=assemble_estimate("upper", records, stats, cfg),
        lower=assemble_estimate("lower", records, stats, cfg),
        atom_count=len(atoms),
        pair_count=len(records),
        config=cfg,
    )
