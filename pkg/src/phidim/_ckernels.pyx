# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of _kernels_py.interval_mass.

Every arithmetic operation and every accumulation happens in the same order
as the pure implementation, so the two backends return bit-identical floats;
the cross-check test asserts exact equality.  Keep the two files in lockstep.
"""

from libc.math cimport exp, log, INFINITY
from libc.stdlib cimport free, malloc


cdef struct _Node:
    int level
    bint lo_t
    bint hi_t
    int chain_rem
    int chain_idx
    bint all_zero
    double m_f
    double m_log


def interval_mass(
    int base,
    list ratios_f,
    list ratios_log,
    list a_digits,
    list a_zero_from,
    bint a_released,
    list c_digits,
    list c_zero_from,
    bint c_released,
    int cap,
    list win_start,
    list win_p_f,
    list win_p_log,
):
    cdef int nwin = len(win_start)
    cdef int i, d, j, child_level
    cdef double lo_f = 0.0, hi_f = 0.0
    cdef double lo_max = -INFINITY, lo_acc = 0.0
    cdef double hi_max = -INFINITY, hi_acc = 0.0
    cdef double m_f, m_log, r_f, r_log
    cdef int level, chain_rem, chain_idx, c_rem, c_idx, ad, cd
    cdef bint lo_t, hi_t, all_zero

    cdef double *rat_f = <double *> malloc(base * sizeof(double))
    cdef double *rat_log = <double *> malloc(base * sizeof(double))
    cdef signed char *adig = <signed char *> malloc(cap * sizeof(signed char))
    cdef signed char *cdig = <signed char *> malloc(cap * sizeof(signed char))
    cdef signed char *azero = <signed char *> malloc((cap + 1) * sizeof(signed char))
    cdef signed char *czero = <signed char *> malloc((cap + 1) * sizeof(signed char))
    cdef int *wstart = <int *> malloc((nwin if nwin else 1) * sizeof(int))
    cdef double *wp_f = <double *> malloc((nwin if nwin else 1) * sizeof(double))
    cdef double *wp_log = <double *> malloc((nwin if nwin else 1) * sizeof(double))
    cdef int stack_cap = (cap + 2) * base + 8
    cdef _Node *stack = <_Node *> malloc(stack_cap * sizeof(_Node))
    cdef int top = 0

    if (rat_f == NULL or rat_log == NULL or adig == NULL or cdig == NULL
            or azero == NULL or czero == NULL or wstart == NULL
            or wp_f == NULL or wp_log == NULL or stack == NULL):
        free(rat_f); free(rat_log); free(adig); free(cdig)
        free(azero); free(czero); free(wstart); free(wp_f); free(wp_log); free(stack)
        raise MemoryError()

    try:
        for i in range(base):
            rat_f[i] = ratios_f[i]
            rat_log[i] = ratios_log[i]
        for i in range(cap):
            adig[i] = a_digits[i]
            cdig[i] = c_digits[i]
        for i in range(cap + 1):
            azero[i] = 1 if a_zero_from[i] else 0
            czero[i] = 1 if c_zero_from[i] else 0
        for i in range(nwin):
            wstart[i] = win_start[i]
            wp_f[i] = win_p_f[i]
            wp_log[i] = win_p_log[i]

        stack[0].level = 0
        stack[0].lo_t = not a_released
        stack[0].hi_t = not c_released
        stack[0].chain_rem = 0
        stack[0].chain_idx = -1
        stack[0].all_zero = 1
        stack[0].m_f = 1.0
        stack[0].m_log = 0.0
        top = 1

        while top > 0:
            top -= 1
            level = stack[top].level
            lo_t = stack[top].lo_t
            hi_t = stack[top].hi_t
            chain_rem = stack[top].chain_rem
            chain_idx = stack[top].chain_idx
            all_zero = stack[top].all_zero
            m_f = stack[top].m_f
            m_log = stack[top].m_log

            if lo_t and azero[level]:
                lo_t = 0
            if hi_t and czero[level]:
                continue

            if not lo_t and not hi_t:
                lo_f += m_f
                hi_f += m_f
                if m_log > lo_max:
                    lo_acc = lo_acc * exp(lo_max - m_log) + 1.0
                    lo_max = m_log
                else:
                    lo_acc += exp(m_log - lo_max)
                if m_log > hi_max:
                    hi_acc = hi_acc * exp(hi_max - m_log) + 1.0
                    hi_max = m_log
                else:
                    hi_acc += exp(m_log - hi_max)
                continue

            if level == cap:
                hi_f += m_f
                if m_log > hi_max:
                    hi_acc = hi_acc * exp(hi_max - m_log) + 1.0
                    hi_max = m_log
                else:
                    hi_acc += exp(m_log - hi_max)
                continue

            ad = adig[level] if lo_t else -1
            cd = cdig[level] if hi_t else base
            child_level = level + 1

            for d in range(base - 1, -1, -1):
                if lo_t and d < ad:
                    continue
                if hi_t and d > cd:
                    continue
                if chain_rem > 0:
                    if d == 1:
                        r_f = wp_f[chain_idx]
                        r_log = wp_log[chain_idx]
                        c_rem = chain_rem - 1
                        c_idx = chain_idx
                    else:
                        r_f = 0.5 * (1.0 - wp_f[chain_idx])
                        r_log = log(r_f) if r_f > 0.0 else -INFINITY
                        c_rem = 0
                        c_idx = -1
                else:
                    r_f = rat_f[d]
                    r_log = rat_log[d]
                    c_rem = 0
                    c_idx = -1
                    if all_zero and d == 1 and nwin:
                        for j in range(nwin):
                            if wstart[j] == child_level:
                                c_rem = wstart[j] + 1
                                c_idx = j
                                break
                if r_f == 0.0:
                    continue
                stack[top].level = child_level
                stack[top].lo_t = lo_t and d == ad
                stack[top].hi_t = hi_t and d == cd
                stack[top].chain_rem = c_rem
                stack[top].chain_idx = c_idx
                stack[top].all_zero = all_zero and d == 0
                stack[top].m_f = m_f * r_f
                stack[top].m_log = m_log + r_log
                top += 1

        log_lo = -INFINITY if lo_max == -INFINITY else lo_max + log(lo_acc)
        log_hi = -INFINITY if hi_max == -INFINITY else hi_max + log(hi_acc)
        return lo_f, hi_f, log_lo, log_hi
    finally:
        free(rat_f)
        free(rat_log)
        free(adig)
        free(cdig)
        free(azero)
        free(czero)
        free(wstart)
        free(wp_f)
        free(wp_log)
        free(stack)
