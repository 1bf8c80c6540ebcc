"""Self-similar measures from affine contractions of the line.

The cylinder walk below is the one ball oracle shared by separated and
overlapping systems alike: mu(A) = sum over length-n words of p_w times the
pullback measure of A, so a cylinder image inside the open interval always
contributes its full p_w, one outside contributes nothing, and straddling
cylinders recurse.  No separation assumption enters; separation only makes
the walk terminate earlier.  Scalars are generic: exact rationals here,
quadratic-ring numbers when the net-interval machinery calls in.

All bundled systems have every probability below 1, hence no atoms, so a
cylinder touching an endpoint of the open interval still carries full mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..enclosure import Enclosure, EmptyBallError
from .base import as_fraction


class CapabilityError(ValueError):
    """Operation requires a separation class the spec does not declare."""


def iterated_map_interval_mass(
    ratios,
    offsets,
    probs: tuple[Fraction, ...],
    hull,
    a,
    c,
    cap: int,
) -> Enclosure:
    """Enclosure of mu((a, c)) for the measure driven by S_j(x) = r_j x + d_j.

    All geometric quantities (ratios, offsets, hull endpoints, a, c) must be
    exact scalars of one comparison-closed type.  Straddling cylinders at
    depth ``cap`` contribute to the upper bound only.
    """
    h0, h1 = hull
    if not c > a:
        return Enclosure.zero()
    lo_sum = Fraction(0)
    hi_sum = Fraction(0)
    m = len(ratios)
    # (scale, offset, mass, depth); S_w(x) = scale*x + offset, None = identity
    stack = [(None, None, Fraction(1), 0)]
    while stack:
        scale, off, mass, depth = stack.pop()
        if scale is None:
            x0, x1 = h0, h1
        else:
            x0 = off + scale * h0
            x1 = off + scale * h1
        if x1 <= a or x0 >= c:
            continue
        if a <= x0 and x1 <= c:
            lo_sum += mass
            hi_sum += mass
            continue
        if depth == cap:
            hi_sum += mass
            continue
        for j in range(m - 1, -1, -1):
            if probs[j] == 0:
                continue
            if scale is None:
                stack.append((ratios[j], offsets[j], mass * probs[j], depth + 1))
            else:
                stack.append(
                    (scale * ratios[j], off + scale * offsets[j], mass * probs[j], depth + 1)
                )
    return Enclosure.from_bounds(lo_sum, hi_sum)


def _mass_guard_levels(p_max: float) -> int:
    if p_max >= 1.0:
        return 200
    return min(int(math.ceil(60.0 / -math.log2(p_max))) + 4, 200)


@dataclass(frozen=True)
class SelfSimilarSpec:
    """IFS S_j(x) = r_j x + d_j with probabilities p_j."""

    ratios: tuple
    offsets: tuple
    probs: tuple[Fraction, ...]
    separation: str = "ssc"

    def __post_init__(self) -> None:
        object.__setattr__(self, "ratios", tuple(self.ratios))
        object.__setattr__(self, "offsets", tuple(self.offsets))
        object.__setattr__(self, "probs", tuple(as_fraction(p) for p in self.probs))
        if self.separation not in ("ssc", "osc", "finite_type"):
            raise ValueError("separation must be ssc, osc, or finite_type")
        if len(self.ratios) < 2 or len({len(self.ratios), len(self.offsets), len(self.probs)}) != 1:
            raise ValueError("need matching ratios, offsets, probs with at least two maps")
        if any(p <= 0 for p in self.probs):
            raise ValueError("probabilities must be positive")
        if sum(self.probs) != 1:
            raise ValueError("probabilities must sum to 1")
        for r in self.ratios:
            if not (r > 0 and r < 1):
                raise ValueError("ratios must lie in (0, 1)")
        if self.separation == "ssc":
            pieces = sorted(self.map_intervals(), key=lambda iv: iv[0])
            for (lo1, hi1), (lo2, hi2) in zip(pieces, pieces[1:]):
                if not hi1 < lo2:
                    raise ValueError("ssc requires pairwise disjoint map images")

    def hull(self):
        """Convex hull of the attractor: spanned by the extreme fixed points."""
        fixed = [d / (1 - r) for r, d in zip(self.ratios, self.offsets)]
        return (min(fixed), max(fixed))

    def map_intervals(self):
        h0, h1 = self.hull()
        return [(d + r * h0, d + r * h1) for r, d in zip(self.ratios, self.offsets)]

    def separation_gap(self):
        """Smallest gap between consecutive map images (SSC only)."""
        if self.separation != "ssc":
            raise CapabilityError("separation gap defined only for ssc specs")
        pieces = sorted(self.map_intervals(), key=lambda iv: iv[0])
        return min(lo2 - hi1 for (_, hi1), (lo2, _) in zip(pieces, pieces[1:]))

    def cylinder(self, word: tuple[int, ...]):
        """(p_w, image interval of the hull under S_w)."""
        scale = None
        off = None
        mass = Fraction(1)
        for j in word:
            mass *= self.probs[j]
            if scale is None:
                scale, off = self.ratios[j], self.offsets[j]
            else:
                off = off + scale * self.offsets[j]
                scale = scale * self.ratios[j]
        h0, h1 = self.hull()
        if scale is None:
            return mass, (h0, h1)
        return mass, (off + scale * h0, off + scale * h1)

    def _interval_mass(self, a, c, cap: int) -> Enclosure:
        return iterated_map_interval_mass(
            self.ratios, self.offsets, self.probs, self.hull(), a, c, cap
        )

    def ball_measure(self, z, radius) -> Enclosure:
        radius = as_fraction(radius) if isinstance(radius, (int, float, str)) else radius
        r_max = max(float(r) for r in self.ratios)
        levels = max(int(math.log(float(radius)) / math.log(r_max)) + 2, 1)
        cap = levels + _mass_guard_levels(max(float(p) for p in self.probs))
        out = self._interval_mass(z - radius, z + radius, cap)
        if out.is_empty():
            raise EmptyBallError(f"ball around {z} with radius {radius} misses the attractor")
        return out

    def support_net(self, resolution) -> list:
        h0, h1 = self.hull()
        out = set()
        stack = [(None, None)]
        while stack:
            scale, off = stack.pop()
            if scale is None:
                x0, x1, width_ok = h0, h1, (h1 - h0) <= resolution
            else:
                x0 = off + scale * h0
                x1 = off + scale * h1
                width_ok = (x1 - x0) <= resolution
            if width_ok:
                out.add(x0)
                out.add(x1)
                continue
            for r, d in zip(self.ratios, self.offsets):
                if scale is None:
                    stack.append((r, d))
                else:
                    stack.append((scale * r, off + scale * d))
            if len(out) > 200_000:
                raise ValueError("support net too large at this resolution")
        return sorted(out)

    def hint_centers(self, radius) -> list:
        return []

    def support_bounds(self):
        return self.hull()

    def total_mass(self) -> Enclosure:
        return Enclosure.from_value(1)


def ssc_cylinder_measure(spec: SelfSimilarSpec, word: tuple[int, ...]):
    """Exact (p_w, S_w[hull]) for a strongly separated spec."""
    if spec.separation != "ssc":
        raise CapabilityError("cylinder geometry is only unambiguous under ssc")
    return spec.cylinder(word)


@dataclass(frozen=True)
class CentralCantorSpec:
    """Symmetric Cantor construction with a per-level ratio schedule.

    Level-k cells split by ratio schedule[k mod len(schedule)] at the two
    ends; every cell carries mass 2^-level.
    """

    schedule: tuple[Fraction, ...] = (Fraction(1, 3),)

    def __post_init__(self) -> None:
        object.__setattr__(self, "schedule", tuple(as_fraction(r) for r in self.schedule))
        if not self.schedule:
            raise ValueError("schedule must be nonempty")
        for r in self.schedule:
            if not 0 < r <= Fraction(1, 2):
                raise ValueError("ratios must lie in (0, 1/2]")

    def _ratio_at(self, level: int) -> Fraction:
        return self.schedule[level % len(self.schedule)]

    def cylinder(self, word: tuple[int, ...]) -> tuple[Fraction, tuple[Fraction, Fraction]]:
        lo = Fraction(0)
        length = Fraction(1)
        for k, d in enumerate(word):
            r = self._ratio_at(k)
            if d == 1:
                lo += (1 - r) * length
            elif d != 0:
                raise ValueError("binary digit words only")
            length *= r
        return Fraction(1, 2 ** len(word)), (lo, lo + length)

    def ball_measure(self, z, radius) -> Enclosure:
        z = as_fraction(z)
        radius = as_fraction(radius)
        if radius <= 0:
            raise ValueError("radius must be positive")
        a = z - radius
        c = z + radius
        r_max = float(max(self.schedule))
        levels = max(int(math.log(float(radius)) / math.log(r_max)) + 2, 1)
        cap = levels + 64
        lo_sum = Fraction(0)
        hi_sum = Fraction(0)
        stack = [(Fraction(0), Fraction(1), Fraction(1), 0)]
        while stack:
            lo, length, mass, depth = stack.pop()
            x1 = lo + length
            if x1 <= a or lo >= c:
                continue
            if a <= lo and x1 <= c:
                lo_sum += mass
                hi_sum += mass
                continue
            if depth == cap:
                hi_sum += mass
                continue
            r = self._ratio_at(depth)
            half = mass / 2
            stack.append((lo + (1 - r) * length, r * length, half, depth + 1))
            stack.append((lo, r * length, half, depth + 1))
        if hi_sum == 0:
            raise EmptyBallError(
                f"ball around {float(z)} with radius {float(radius)} misses the Cantor set"
            )
        return Enclosure.from_bounds(lo_sum, hi_sum)

    def support_net(self, resolution) -> list[Fraction]:
        resolution = as_fraction(resolution)
        out: set[Fraction] = set()
        stack = [(Fraction(0), Fraction(1), 0)]
        while stack:
            lo, length, depth = stack.pop()
            if length <= resolution:
                out.add(lo)
                out.add(lo + length)
                continue
            r = self._ratio_at(depth)
            stack.append((lo, r * length, depth + 1))
            stack.append((lo + (1 - r) * length, r * length, depth + 1))
            if len(out) > 200_000:
                raise ValueError("support net too large at this resolution")
        return sorted(out)

    def hint_centers(self, radius) -> list[Fraction]:
        return []

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        return (Fraction(0), Fraction(1))

    def total_mass(self) -> Enclosure:
        return Enclosure.from_value(1)
