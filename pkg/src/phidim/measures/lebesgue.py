"""Length measure on [0,1] and single point masses.

Both are exact: every query is Fraction arithmetic wrapped into a degenerate
enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..enclosure import Enclosure, EmptyBallError
from .base import as_fraction


@dataclass(frozen=True)
class LebesgueSpec:
    """Lebesgue measure restricted to [0, 1]."""

    def ball_measure(self, z: Fraction, radius: Fraction) -> Enclosure:
        z = as_fraction(z)
        radius = as_fraction(radius)
        if radius <= 0:
            raise ValueError("radius must be positive")
        lo = max(z - radius, Fraction(0))
        hi = min(z + radius, Fraction(1))
        if hi <= lo:
            raise EmptyBallError(f"ball ({float(z - radius)}, {float(z + radius)}) misses [0,1]")
        return Enclosure.from_value(hi - lo)

    def support_net(self, resolution: Fraction) -> list[Fraction]:
        resolution = as_fraction(resolution)
        if resolution <= 0:
            raise ValueError("resolution must be positive")
        count = int(1 / resolution) + 1
        return [min(Fraction(k) * resolution, Fraction(1)) for k in range(count + 1)]

    def hint_centers(self, radius: Fraction) -> list[Fraction]:
        return []

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        return (Fraction(0), Fraction(1))

    def total_mass(self) -> Enclosure:
        return Enclosure.from_value(1)


@dataclass(frozen=True)
class PointMassSpec:
    """Unit mass at a single point."""

    at: Fraction = Fraction(0)

    def ball_measure(self, z: Fraction, radius: Fraction) -> Enclosure:
        z = as_fraction(z)
        radius = as_fraction(radius)
        if radius <= 0:
            raise ValueError("radius must be positive")
        if abs(z - self.at) < radius:  # open ball
            return Enclosure.from_value(1)
        raise EmptyBallError("ball misses the atom")

    def support_net(self, resolution: Fraction) -> list[Fraction]:
        return [self.at]

    def hint_centers(self, radius: Fraction) -> list[Fraction]:
        return [self.at]

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        return (self.at, self.at)

    def total_mass(self) -> Enclosure:
        return Enclosure.from_value(1)
