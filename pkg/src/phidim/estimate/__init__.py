"""Scale-pair scanning estimators for measure and set dimension ratios."""

from .boxdims import BoxDimensions, estimate_minkowski_frostman
from .bruteforce import BruteForceResult, brute_force_reference, exact_ball_mass
from .config import (
    ConfigurationError,
    EstimationConfig,
    alpha_ratio,
    first_admissible_fine_depth,
    log_scale_gap,
    scale_pair_admissible,
)
from .covering import covering_number, estimate_set_phi_dim
from .scan import (
    BallCache,
    DimensionEstimate,
    PairRecord,
    ScanStats,
    SpectrumReport,
    SpectrumRow,
    assemble_estimate,
    estimate_lower_phi_dim,
    estimate_spectrum,
    estimate_upper_phi_dim,
    scan_admissible_pairs,
)

__all__ = [
    "BallCache",
    "BoxDimensions",
    "BruteForceResult",
    "ConfigurationError",
    "DimensionEstimate",
    "EstimationConfig",
    "PairRecord",
    "ScanStats",
    "SpectrumReport",
    "SpectrumRow",
    "alpha_ratio",
    "assemble_estimate",
    "brute_force_reference",
    "covering_number",
    "estimate_lower_phi_dim",
    "estimate_minkowski_frostman",
    "estimate_set_phi_dim",
    "estimate_spectrum",
    "estimate_upper_phi_dim",
    "exact_ball_mass",
    "first_admissible_fine_depth",
    "log_scale_gap",
    "scale_pair_admissible",
    "scan_admissible_pairs",
]
