"""Shared contract for ball-measure oracles.

Every measure family exposes the same five queries; the estimator modules
depend only on this protocol.  Ball queries take an open ball B(z, R) =
(z - R, z + R) and return a certified Enclosure.  Radii and centers are exact
rationals end to end; oracles may never round an endpoint before classifying
cells against it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Protocol, runtime_checkable

from ..enclosure import Enclosure, EmptyBallError, PrecisionError

__all__ = [
    "MeasureOracle",
    "EmptyBallError",
    "PrecisionError",
    "as_fraction",
]


def as_fraction(x) -> Fraction:
    """Exact conversion; floats convert via their binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


@runtime_checkable
class MeasureOracle(Protocol):
    def ball_measure(self, z: Fraction, radius: Fraction) -> Enclosure:
        """Enclosure of mu((z - radius, z + radius)).

        Raises EmptyBallError when the enclosure is exactly zero.
        """
        ...

    def support_net(self, resolution: Fraction) -> list[Fraction]:
        """Centers inside the support, covering it to within ``resolution``."""
        ...

    def hint_centers(self, radius: Fraction) -> list[Fraction]:
        """Extra centers where the measure is expected to be extremal."""
        ...

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        """(inf, sup) of the support."""
        ...

    def total_mass(self) -> Enclosure:
        ...
