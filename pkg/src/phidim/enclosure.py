"""Certified lower/upper bounds for measure values.

Every ball oracle in this package returns an Enclosure rather than a point
value.  The log fields duplicate lo/hi in natural-log form so that masses far
below float underflow (cascades at depth 60 carry masses near 1e-600) still
order correctly; they are maintained alongside the linear fields, never
recomputed from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_NEG_INF = float("-inf")


def exact_log(value: Fraction | int | float) -> float:
    """Natural log that survives Fractions too large or small for float."""
    if isinstance(value, Fraction):
        if value == 0:
            return _NEG_INF
        if value < 0:
            raise ValueError("log of negative value")
        return math.log(value.numerator) - math.log(value.denominator)
    if value == 0:
        return _NEG_INF
    if value < 0:
        raise ValueError("log of negative value")
    return math.log(value)


class LogSum:
    """Streaming log-sum-exp accumulator."""

    __slots__ = ("_max", "_acc")

    def __init__(self) -> None:
        self._max = _NEG_INF
        self._acc = 0.0

    def add(self, log_term: float) -> None:
        if log_term == _NEG_INF:
            return
        if log_term <= self._max:
            self._acc += math.exp(log_term - self._max)
            return
        if self._max == _NEG_INF:
            self._max = log_term
            self._acc = 1.0
            return
        self._acc = self._acc * math.exp(self._max - log_term) + 1.0
        self._max = log_term

    def value(self) -> float:
        if self._max == _NEG_INF:
            return _NEG_INF
        return self._max + math.log(self._acc)


class PrecisionError(ArithmeticError):
    """Enclosure width above tolerance after maximal refinement."""


class EmptyBallError(ValueError):
    """Ball query too far from the support to contain any mass."""


@dataclass(frozen=True)
class Enclosure:
    """lo <= value <= hi, with matching natural-log bounds."""

    lo: float
    hi: float
    log_lo: float
    log_hi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lo <= self.hi:
            raise ValueError(f"invalid enclosure [{self.lo}, {self.hi}]")
        if self.log_lo > self.log_hi + 1e-12:
            raise ValueError("log bounds out of order")

    @staticmethod
    def from_value(value: Fraction | int | float) -> "Enclosure":
        v = float(value)
        lg = exact_log(value)
        return Enclosure(v, v, lg, lg)

    @staticmethod
    def from_bounds(
        lo: Fraction | int | float, hi: Fraction | int | float
    ) -> "Enclosure":
        return Enclosure(float(lo), float(hi), exact_log(lo), exact_log(hi))

    @staticmethod
    def zero() -> "Enclosure":
        return Enclosure(0.0, 0.0, _NEG_INF, _NEG_INF)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def log_midpoint(self) -> float:
        """Log of the geometric midpoint; robust when lo/hi underflow."""
        if self.log_lo == _NEG_INF:
            return self.log_hi  # one-sided: fall back to the upper bound
        return 0.5 * (self.log_lo + self.log_hi)

    def relative_width(self) -> float:
        if self.hi == 0.0:
            return 0.0
        return (self.hi - self.lo) / self.hi

    def is_empty(self) -> bool:
        # the log field is authoritative: hi underflows to 0.0 for masses
        # below the float floor while log_hi stays finite
        return self.log_hi == _NEG_INF

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def __add__(self, other: "Enclosure") -> "Enclosure":
        lo_acc = LogSum()
        lo_acc.add(self.log_lo)
        lo_acc.add(other.log_lo)
        hi_acc = LogSum()
        hi_acc.add(self.log_hi)
        hi_acc.add(other.log_hi)
        return Enclosure(
            self.lo + other.lo,
            self.hi + other.hi,
            lo_acc.value(),
            hi_acc.value(),
        )
