"""Dispatch layer for the cascade interval-mass kernels.

Exact endpoint handling happens here: interval endpoints arrive as Fractions,
are clamped to [0, 1], and are expanded into base-b digit arrays with exact
integer arithmetic.  The digit arrays go to the compiled kernel when the
extension built, or to the pure-Python twin otherwise (or when PHIDIM_PURE=1
is set).  Both produce bit-identical results; tests assert that.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from .enclosure import Enclosure, exact_log
from . import _kernels_py

try:  # pragma: no cover - exercised only when the extension is present
    from . import _ckernels  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover
    _ckernels = None


def kernel_backend() -> str:
    """Which kernel implementation interval calls will use."""
    if os.environ.get("PHIDIM_PURE") == "1" or _ckernels is None:
        return "pure"
    return "compiled"


def fraction_digits(x: Fraction, base: int, cap: int) -> tuple[list[int], bool]:
    """First ``cap`` base-b digits of x in [0, 1), plus exactness flag."""
    num = x.numerator
    den = x.denominator
    digits: list[int] = []
    for _ in range(cap):
        num *= base
        d, num = divmod(num, den)
        digits.append(d)
    return digits, num == 0


def _zero_suffix(digits: list[int], terminated: bool) -> list[bool]:
    # zero_from[i] is true when every digit at index >= i vanishes exactly
    out = [False] * (len(digits) + 1)
    ok = terminated
    out[len(digits)] = ok
    for i in range(len(digits) - 1, -1, -1):
        ok = ok and digits[i] == 0
        out[i] = ok
    return out


def interval_mass_enclosure(
    base: int,
    ratios: tuple[Fraction, ...],
    a: Fraction,
    c: Fraction,
    cap: int,
    windows: tuple[tuple[int, Fraction], ...] = (),
) -> Enclosure:
    """Enclosure of the cascade mass of the open interval (a, c).

    ``ratios`` are the per-digit child ratios of the stationary construction;
    ``windows`` optionally re-weights nested chains of middle cells (base 3
    only).  ``cap`` is the deepest tree level walked; straddling cells at the
    cap inflate only the upper bound.
    """
    if base < 2:
        raise ValueError("base must be at least 2")
    if len(ratios) != base:
        raise ValueError("need one ratio per digit")
    if cap < 1:
        raise ValueError("cap must be positive")
    if windows and base != 3:
        raise ValueError("chain windows require base 3")
    if c <= a:
        return Enclosure.zero()
    if c <= 0 or a >= 1:
        return Enclosure.zero()

    a_released = a <= 0
    c_released = c >= 1
    if a_released:
        a_digits = [0] * cap
        a_term = True
    else:
        a_digits, a_term = fraction_digits(a, base, cap)
    if c_released:
        c_digits = [0] * cap
        c_term = True
    else:
        c_digits, c_term = fraction_digits(c, base, cap)

    ratios_f = [float(r) for r in ratios]
    ratios_log = [exact_log(r) if r > 0 else float("-inf") for r in ratios]
    win_start = [n for n, _ in windows]
    win_p_f = [float(p) for _, p in windows]
    win_p_log = [exact_log(p) if p > 0 else float("-inf") for _, p in windows]

    args = (
        base,
        ratios_f,
        ratios_log,
        a_digits,
        _zero_suffix(a_digits, a_term),
        a_released,
        c_digits,
        _zero_suffix(c_digits, c_term),
        c_released,
        cap,
        win_start,
        win_p_f,
        win_p_log,
    )
    if kernel_backend() == "compiled":
        lo_f, hi_f, log_lo, log_hi = _ckernels.interval_mass(*args)
    else:
        lo_f, hi_f, log_lo, log_hi = _kernels_py.interval_mass(*args)

    # Float cancellation can nick the linear fields; the log fields are the
    # authoritative ordering, so only repair lo <= hi in linear space.
    if lo_f > hi_f:
        lo_f = hi_f
    return Enclosure(lo_f, hi_f, log_lo, log_hi)


def suggested_cap(query_level: int, max_ratio: float) -> int:
    """Depth at which straddling-cell slack drops below 2^-60 relatively."""
    if max_ratio >= 1.0:
        raise ValueError("ratios must be below 1")
    if max_ratio <= 0.0:
        return query_level + 1
    guard = int(math.ceil(60.0 / -math.log2(max_ratio)))
    return query_level + max(guard, 8)
