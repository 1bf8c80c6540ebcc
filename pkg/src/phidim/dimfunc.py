"""Scale functions controlling the admissible gap between two radii.

A scale function f maps (0, 1) to [0, inf) and the product x^(1+f(x)) must
decrease strictly to 0 along geometric grids.  The built-in kinds cover the
constant case, c/|log x|, log|log x|/|log x| (clamped at 0 near 1), |log x|,
the spectrum parameterization 1/theta - 1, and tabulated functions with
log-linear interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_DOMAIN_FLOOR = 2.0**-64

KINDS = ("constant", "inverse_log", "psi", "abs_log", "theta", "table")


class DomainError(ValueError):
    """Raised when a scale function is evaluated outside (domain_floor, 1)."""


def geometric_grid(base: float, n_max: int, n_min: int = 1) -> list[float]:
    """Scales base**-i for i = n_min..n_max, largest first."""
    if base <= 1:
        raise ValueError("base must exceed 1")
    return [base**-i for i in range(n_min, n_max + 1)]


@dataclass(frozen=True)
class ScaleFunctionInfo:
    """Derived quantities: limsup of 1/f near 0 and a doubling estimate."""

    inv_limsup: float
    is_doubling: bool
    doubling_constant: float
    provenance: str  # "analytic" for built-in kinds, "grid-estimate" for tables


@dataclass(frozen=True)
class ScaleFunction:
    kind: str
    delta: float = 0.0
    c: float = 1.0
    theta: float = 0.5
    points: tuple[tuple[float, float], ...] = ()
    domain_floor: float = DEFAULT_DOMAIN_FLOOR

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown scale function kind {self.kind!r}")
        if self.kind == "constant" and self.delta < 0:
            raise ValueError("constant kind needs delta >= 0")
        if self.kind == "inverse_log" and self.c <= 0:
            raise ValueError("inverse_log kind needs c > 0")
        if self.kind == "theta" and not 0 < self.theta < 1:
            raise ValueError("theta kind needs theta in (0, 1)")
        if self.kind == "table":
            pts = tuple((float(x), float(p)) for x, p in self.points)
            if not pts:
                raise ValueError("table kind needs at least one point")
            if any(not 0 < x < 1 for x, _ in pts):
                raise ValueError("table abscissae must lie in (0, 1)")
            pts = tuple(sorted(pts))
            if any(a[0] == b[0] for a, b in zip(pts, pts[1:])):
                raise ValueError("table abscissae must be distinct")
            object.__setattr__(self, "points", pts)
        if not 0 < self.domain_floor < 1:
            raise ValueError("domain_floor must lie in (0, 1)")

    def __call__(self, x: float) -> float:
        if not self.domain_floor < x < 1:
            raise DomainError(
                f"scale {x!r} outside ({self.domain_floor!r}, 1)"
            )
        if self.kind == "constant":
            return self.delta
        if self.kind == "theta":
            return 1.0 / self.theta - 1.0
        log_x = -math.log(x)  # |log x| since x < 1
        if self.kind == "inverse_log":
            return self.c / log_x
        if self.kind == "abs_log":
            return log_x
        if self.kind == "psi":
            # log|log x| / |log x|, clamped so the value stays nonnegative
            # on (1/e, 1) where the raw expression dips below 0.
            return max(0.0, math.log(log_x) / log_x)
        return self._table_value(log_x)

    def _table_value(self, log_x: float) -> float:
        # Interpolation is linear in (log x, value); flat beyond the ends.
        pts = self.points
        t = -log_x  # log x, negative
        if t <= math.log(pts[0][0]):
            return pts[0][1]
        if t >= math.log(pts[-1][0]):
            return pts[-1][1]
        for (x0, p0), (x1, p1) in zip(pts, pts[1:]):
            t0, t1 = math.log(x0), math.log(x1)
            if t0 <= t <= t1:
                w = (t - t0) / (t1 - t0)
                return p0 + w * (p1 - p0)
        raise AssertionError("unreachable: sorted table scan")

    def depth_weight(self, n: int, r_min: float) -> float:
        """n times the function value at r_min**n."""
        if n < 1:
            raise ValueError("n must be >= 1")
        if not 0 < r_min < 1:
            raise ValueError("r_min must lie in (0, 1)")
        return n * self(r_min**n)

    def metadata(self) -> ScaleFunctionInfo:
        """Analytic limsup of 1/f for built-in kinds; grid estimate for tables."""
        if self.kind == "constant":
            inv = math.inf if self.delta == 0 else 1.0 / self.delta
            return ScaleFunctionInfo(inv, True, 1.0, "analytic")
        if self.kind == "theta":
            phi = 1.0 / self.theta - 1.0
            return ScaleFunctionInfo(1.0 / phi, True, 1.0, "analytic")
        if self.kind == "abs_log":
            return ScaleFunctionInfo(0.0, True, 1.0, "analytic")
        if self.kind == "inverse_log":
            return ScaleFunctionInfo(math.inf, True, 2.0, "analytic")
        if self.kind == "psi":
            # 1/f = |log x|/log|log x| -> inf; ratio f(x)/f(x/2) <= 2 below e^-e.
            return ScaleFunctionInfo(math.inf, True, 2.0, "analytic")
        finest = self.points[: max(1, len(self.points) // 4)]  # smallest x
        inv = 0.0
        for _, p in finest:
            inv = math.inf if p == 0 else max(inv, 1.0 / p)
        ok, const = is_doubling_function(
            self, geometric_grid(2.0, 60)
        )
        return ScaleFunctionInfo(inv, ok, const, "grid-estimate")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    checked: int
    first_violation: str | None = None


def validate_scale_function(
    f: ScaleFunction, grid: list[float]
) -> ValidationReport:
    """Check nonnegativity and strict decrease of x^(1+f(x)) on a grid."""
    xs = sorted(
        (x for x in grid if f.domain_floor < x < 1), reverse=True
    )
    if len(xs) < 8:
        raise ValueError("grid needs at least 8 points inside the domain")
    checked = 0
    prev_exponent = None
    for x in xs:
        value = f(x)
        checked += 1
        if value < 0:
            return ValidationReport(
                False, checked, f"f({x}) = {value} < 0"
            )
        exponent = (1.0 + value) * math.log(x)  # log of x^(1+f(x))
        if prev_exponent is not None and exponent >= prev_exponent:
            return ValidationReport(
                False,
                checked,
                f"x^(1+f) fails to decrease at x = {x}",
            )
        prev_exponent = exponent
    return ValidationReport(True, checked)


def is_doubling_function(
    f: ScaleFunction, grid: list[float]
) -> tuple[bool, float]:
    """Largest f(x)/f(x/2) on the grid and whether it stays stable.

    Stability: the maximum over the finest half of the grid must not exceed
    the coarse-half maximum by more than 10%.  Points where f(x/2) = 0 are
    skipped; an all-zero function counts as doubling with constant 1.
    """
    xs = sorted(
        (
            x
            for x in grid
            if f.domain_floor < x < 1 and f.domain_floor < x / 2
        ),
        reverse=True,
    )
    ratios: list[float] = []
    for x in xs:
        denom = f(x / 2)
        if denom == 0:
            continue
        ratios.append(f(x) / denom)
    if not ratios:
        return True, 1.0
    overall = max(ratios)
    half = len(ratios) // 2
    if half == 0:
        return True, overall
    coarse = max(ratios[:half])
    fine = max(ratios[half:])
    stable = math.isfinite(overall) and fine <= max(coarse, 1.0) * 1.1
    return stable, overall
