"""Exact transition-matrix norms for the biased golden-ratio convolution.

The two central net-interval families are governed by 2x2 nonnegative
matrices in the bias p; the norm used throughout is the entry sum.  Powers
are exact rational matrices computed by repeated squaring, so norm tables
stay exact out to astronomically small values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..measures.base import as_fraction

Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def transition_matrices(p) -> tuple[Matrix, Matrix]:
    """The left-anchored and right-anchored 2x2 transition matrices at bias p."""
    p = as_fraction(p)
    q = 1 - p
    t0: Matrix = ((p * q, p * q), (Fraction(0), q * q))
    t1: Matrix = ((p * p, Fraction(0)), (q * q, p * q))
    return t0, t1


def matrix_mul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def matrix_norm(a: Matrix) -> Fraction:
    """Entry-sum norm; entries are nonnegative so no absolute values arise."""
    return a[0][0] + a[0][1] + a[1][0] + a[1][1]


@dataclass(frozen=True)
class TransitionNormRow:
    k: int
    power: int  # 2**k
    norm_t0: Fraction
    norm_t1: Fraction


def bc_transition_norms(p, k_max: int) -> list[TransitionNormRow]:
    """Exact norms of T0^(2^k) and T1^(2^k) for k = 0..k_max.

    Requires bias p in (1/2, 1) as an exact rational; repeated squaring keeps
    every row exact.
    """
    p = as_fraction(p)
    if not Fraction(1, 2) < p < 1:
        raise ValueError("bias must lie strictly between 1/2 and 1")
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    t0, t1 = transition_matrices(p)
    rows = []
    power = 1
    for k in range(k_max + 1):
        rows.append(
            TransitionNormRow(k=k, power=power, norm_t0=matrix_norm(t0), norm_t1=matrix_norm(t1))
        )
        if k < k_max:
            t0 = matrix_mul(t0, t0)
            t1 = matrix_mul(t1, t1)
            power *= 2
    return rows
