"""Exact net-interval machinery for equicontractive systems on [0, 1]."""

from .bernoulli import (
    TransitionNormRow,
    bc_transition_norms,
    matrix_mul,
    matrix_norm,
    transition_matrices,
)
from .doubling import DoublingReport, adjacent_log_ratios, phi_doubling_check
from .exactnum import GoldenNum
from .levels import (
    FiniteTypeMeasure,
    FiniteTypeViolation,
    GapCheckReport,
    NetInterval,
    NetLevel,
    NetLevels,
    build_net_levels,
    central_overlap_system,
    dyadic_system,
    finite_type_ball_oracle,
    finite_type_gap_check,
    golden_bernoulli,
    net_interval_measure_enclosure,
    net_interval_pq,
)

__all__ = [
    "GoldenNum",
    "NetInterval",
    "NetLevel",
    "NetLevels",
    "FiniteTypeMeasure",
    "FiniteTypeViolation",
    "GapCheckReport",
    "DoublingReport",
    "TransitionNormRow",
    "build_net_levels",
    "net_interval_pq",
    "net_interval_measure_enclosure",
    "finite_type_ball_oracle",
    "finite_type_gap_check",
    "phi_doubling_check",
    "adjacent_log_ratios",
    "bc_transition_norms",
    "transition_matrices",
    "matrix_mul",
    "matrix_norm",
    "dyadic_system",
    "golden_bernoulli",
    "central_overlap_system",
]
