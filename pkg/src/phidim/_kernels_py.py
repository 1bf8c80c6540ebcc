"""Pure-Python interval-mass kernels for base-b multiplicative cascades.

The hot loop of every cascade ball query lives here (or in the compiled twin
``_ckernels``, which mirrors this file operation for operation so that both
paths produce bit-identical floats).  A query interval (a, c) is given by the
exact base-b digit expansions of its endpoints; the walk classifies each cell
of the b-adic tree against the open interval using only digit comparisons, so
no arbitrary-precision arithmetic is needed inside the recursion.

Classification of a cell whose digit path still matches a prefix of an
endpoint expansion ("tight" on that side):

* tight on neither side: the cell lies strictly inside (a, c); its full mass
  enters both bounds and the branch stops.
* still tight at the depth cap: the cell straddles an endpoint; its mass
  enters the upper bound only.
* an endpoint whose remaining digits are all zero sits on the cell boundary;
  cascades are non-atomic, so a left endpoint on the boundary releases the
  cell (full mass) while a right endpoint on the boundary discards it.

Chain windows implement cascades that re-weight one nested chain of middle
cells: window j starts at the cell [b^-n_j, 2*b^-n_j] and follows middle
children for n_j + 1 further levels; while active, the middle child receives
ratio p_j and the flanking children (1 - p_j)/2 each.
"""

from __future__ import annotations

import math

_NEG_INF = float("-inf")


def interval_mass(
    base: int,
    ratios_f: list[float],
    ratios_log: list[float],
    a_digits: list[int],
    a_zero_from: list[bool],
    a_released: bool,
    c_digits: list[int],
    c_zero_from: list[bool],
    c_released: bool,
    cap: int,
    win_start: list[int],
    win_p_f: list[float],
    win_p_log: list[float],
) -> tuple[float, float, float, float]:
    """Mass of the open interval (a, c), returned as (lo, hi, log_lo, log_hi).

    Cells still straddling an endpoint at level ``cap`` contribute to the
    upper bound only, so the enclosure is rigorous at every cap.
    """
    lo_f = 0.0
    hi_f = 0.0
    lo_max = _NEG_INF
    lo_acc = 0.0
    hi_max = _NEG_INF
    hi_acc = 0.0
    nwin = len(win_start)

    # Stack entries: (level, lo_t, hi_t, chain_rem, chain_idx, all_zero,
    #                 mass_f, mass_log).  chain_rem > 0 means the cell is a
    # chain cell that still re-weights its children.
    stack = [(0, not a_released, not c_released, 0, -1, True, 1.0, 0.0)]
    while stack:
        level, lo_t, hi_t, chain_rem, chain_idx, all_zero, m_f, m_log = stack.pop()

        if lo_t and a_zero_from[level]:
            lo_t = False
        if hi_t and c_zero_from[level]:
            continue  # cell starts exactly at c: entirely outside (a, c)

        if not lo_t and not hi_t:
            lo_f += m_f
            hi_f += m_f
            if m_log > lo_max:
                lo_acc = lo_acc * math.exp(lo_max - m_log) + 1.0
                lo_max = m_log
            else:
                lo_acc += math.exp(m_log - lo_max)
            if m_log > hi_max:
                hi_acc = hi_acc * math.exp(hi_max - m_log) + 1.0
                hi_max = m_log
            else:
                hi_acc += math.exp(m_log - hi_max)
            continue

        if level == cap:
            hi_f += m_f
            if m_log > hi_max:
                hi_acc = hi_acc * math.exp(hi_max - m_log) + 1.0
                hi_max = m_log
            else:
                hi_acc += math.exp(m_log - hi_max)
            continue

        ad = a_digits[level] if lo_t else -1
        cd = c_digits[level] if hi_t else base

        # Push children in reverse digit order so they pop left to right;
        # the accumulation order must match the compiled kernel exactly.
        child_level = level + 1
        for d in range(base - 1, -1, -1):
            if lo_t and d < ad:
                continue
            if hi_t and d > cd:
                continue
            if chain_rem > 0:
                if d == 1:
                    r_f = win_p_f[chain_idx]
                    r_log = win_p_log[chain_idx]
                    c_rem = chain_rem - 1
                    c_idx = chain_idx
                else:
                    r_f = 0.5 * (1.0 - win_p_f[chain_idx])
                    r_log = math.log(r_f) if r_f > 0.0 else _NEG_INF
                    c_rem = 0
                    c_idx = -1
            else:
                r_f = ratios_f[d]
                r_log = ratios_log[d]
                c_rem = 0
                c_idx = -1
                if all_zero and d == 1 and nwin:
                    for j in range(nwin):
                        if win_start[j] == child_level:
                            c_rem = win_start[j] + 1
                            c_idx = j
                            break
            if r_f == 0.0:
                continue
            stack.append(
                (
                    child_level,
                    lo_t and d == ad,
                    hi_t and d == cd,
                    c_rem,
                    c_idx,
                    all_zero and d == 0,
                    m_f * r_f,
                    m_log + r_log,
                )
            )

    log_lo = _NEG_INF if lo_max == _NEG_INF else lo_max + math.log(lo_acc)
    log_hi = _NEG_INF if hi_max == _NEG_INF else hi_max + math.log(hi_acc)
    return lo_f, hi_f, log_lo, log_hi
