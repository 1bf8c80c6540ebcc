"""Estimator configuration and the shared admissibility predicate.

The same predicate and the same alpha quotient are used by the grid scanner
and the brute-force reference so that, on identical grids with exact oracles,
the two agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..dimfunc import ScaleFunction
from ..enclosure import exact_log

_ADMISS_SLACK = 1e-12


class ConfigurationError(ValueError):
    """Estimator configuration that admits no work or contradicts itself."""


@dataclass(frozen=True)
class EstimationConfig:
    """Scan geometry for the dimension estimators.

    Scales are base**-i for i in [n_min, n_max], capped above by half the
    support diameter; lambda_min (natural log units) discards pairs whose
    scale gap is too small for the exponent to dominate constants.  Explicit
    R/r grids replace the geometric grid entirely and bypass lambda_min and
    the R-cap, which is what the brute-force comparisons need; admissibility
    r <= R^(1+Phi(R)) is never bypassed.
    """

    base: int = 2
    n_min: int = 2
    n_max: int = 20
    lambda_min: float = 3.0
    scan_mode: str = "full"  # or "boundary": only the coarsest admissible r per R
    divergence_threshold: float = 0.5
    net_level: int | None = None  # center resolution exponent; default min(7, n_max)
    centers: tuple | None = None  # explicit centers override support_net
    explicit_R: tuple | None = None
    explicit_r: tuple | None = None
    min_log_mass: float = -math.inf  # drop r-balls certified below this log mass
    threads: int = 1

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ConfigurationError("base must be at least 2")
        if self.n_min < 2:
            raise ConfigurationError("n_min must be at least 2")
        if self.n_max < self.n_min:
            raise ConfigurationError("depth range is empty")
        if not self.lambda_min > 0:
            raise ConfigurationError("lambda_min must be positive")
        if self.scan_mode not in ("full", "boundary"):
            raise ConfigurationError("scan_mode must be full or boundary")
        if self.threads < 1:
            raise ConfigurationError("threads must be positive")
        if (self.explicit_R is None) != (self.explicit_r is None):
            raise ConfigurationError("explicit grids need both explicit_R and explicit_r")
        if self.explicit_R is not None:
            object.__setattr__(
                self, "explicit_R", tuple(Fraction(x) for x in self.explicit_R)
            )
            object.__setattr__(
                self, "explicit_r", tuple(Fraction(x) for x in self.explicit_r)
            )
            if not self.explicit_R or not self.explicit_r:
                raise ConfigurationError("explicit grids must be nonempty")

    @property
    def resolved_net_level(self) -> int:
        if self.net_level is not None:
            return self.net_level
        return min(7, self.n_max)


def scale_pair_admissible(
    R: Fraction, r: Fraction, phi: ScaleFunction, lambda_min: float | None = None
) -> bool:
    """Shared admissibility: r <= R^(1+Phi(R)) in logs with tiny slack, plus
    the optional minimum log gap.  R at or above 1 falls outside the scale
    function's domain; there the exponent condition degenerates to r < R."""
    if not r < R:
        return False
    log_R = exact_log(R)
    log_r = exact_log(r)
    if lambda_min is not None and not (log_R - log_r >= lambda_min - _ADMISS_SLACK):
        return False
    if log_R < 0:
        if not (log_r <= (1.0 + phi(float(R))) * log_R + _ADMISS_SLACK):
            return False
    return True


def alpha_ratio(log_x: float, log_gap: float) -> float:
    """The exponent quotient; one shared spelling for bit-exact agreement."""
    return log_x / log_gap


def log_scale_gap(R: Fraction, r: Fraction) -> float:
    return exact_log(R) - exact_log(r)


def first_admissible_fine_depth(
    phi: ScaleFunction, cfg: EstimationConfig, i: int
) -> int:
    """Smallest j with (R=b^-i, r=b^-j) admissible under cfg's lambda_min."""
    log_b = math.log(cfg.base)
    log_R = -i * log_b
    bound = (1.0 + phi(float(Fraction(1, cfg.base**i)))) * log_R
    j_phi = math.ceil((-bound - _ADMISS_SLACK) / log_b)
    j_gap = math.ceil(i + (cfg.lambda_min - _ADMISS_SLACK) / log_b)
    return max(j_phi, j_gap, i + 1)
