"""Ball-measure oracles for the bundled measure families."""

from ..enclosure import Enclosure, EmptyBallError, PrecisionError
from .base import MeasureOracle, as_fraction
from .lebesgue import LebesgueSpec, PointMassSpec
from .discrete import DiscreteSpec
from .cascade import ChainCascadeSpec, StationaryCascadeSpec
from .selfsimilar import (
    CapabilityError,
    CentralCantorSpec,
    SelfSimilarSpec,
    iterated_map_interval_mass,
    ssc_cylinder_measure,
)
from .localdim import LocalDimensionEstimate, local_dimension_estimate


def ball_measure(spec, z, radius) -> Enclosure:
    """Enclosure of mu(B(z, radius)) for any bundled spec."""
    return spec.ball_measure(z, radius)


def support_net(spec, resolution):
    """Centers in supp(mu) covering the support to within resolution."""
    return spec.support_net(resolution)


def cascade_cell_measure(spec, word) -> object:
    """Exact mass of a cascade cell addressed by its digit word."""
    return spec.cell_measure(tuple(word))


__all__ = [
    "Enclosure",
    "EmptyBallError",
    "PrecisionError",
    "MeasureOracle",
    "as_fraction",
    "LebesgueSpec",
    "PointMassSpec",
    "DiscreteSpec",
    "StationaryCascadeSpec",
    "ChainCascadeSpec",
    "SelfSimilarSpec",
    "CentralCantorSpec",
    "CapabilityError",
    "ssc_cylinder_measure",
    "iterated_map_interval_mass",
    "LocalDimensionEstimate",
    "local_dimension_estimate",
    "ball_measure",
    "support_net",
    "cascade_cell_measure",
]
