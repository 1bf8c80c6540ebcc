"""Exact arithmetic in Q(rho), rho the positive root of x^2 + x - 1.

Elements are u + v*rho with rational u, v.  Comparisons reduce to the sign of
u + v*rho, decided exactly: for v != 0 the question is whether the rational
-u/v lies left or right of rho, and rho is a root of the irreducible
x^2 + x - 1, so the sign of q^2 + q - 1 settles it with no precision escape
hatch needed.  This is the contraction ratio of the golden-mean Bernoulli
convolution; rationals embed as v = 0.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

_RHO_FLOAT = (5.0**0.5 - 1.0) / 2.0


def _coerce(x) -> "GoldenNum | None":
    if isinstance(x, GoldenNum):
        return x
    if isinstance(x, (int, Fraction)):
        return GoldenNum(x)
    return None


@total_ordering
class GoldenNum:
    """u + v*rho with exact rational components."""

    __slots__ = ("u", "v")

    def __init__(self, u=0, v=0) -> None:
        self.u = u if isinstance(u, Fraction) else Fraction(u)
        self.v = v if isinstance(v, Fraction) else Fraction(v)

    @staticmethod
    def rho() -> "GoldenNum":
        return GoldenNum(0, 1)

    def _sign(self) -> int:
        if self.v == 0:
            return -1 if self.u < 0 else (1 if self.u > 0 else 0)
        q = -self.u / self.v
        if q < 0:
            rho_gt_q = True
        else:
            # rho > q  <=>  q^2 + q - 1 < 0 for q >= 0
            rho_gt_q = q * q + q - 1 < 0
        if self.v > 0:
            return 1 if rho_gt_q else -1
        return -1 if rho_gt_q else 1

    def __bool__(self) -> bool:
        return self.u != 0 or self.v != 0

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __lt__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return (self - o)._sign() < 0

    def __hash__(self) -> int:
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v))

    def __add__(self, other) -> "GoldenNum":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNum(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self) -> "GoldenNum":
        return GoldenNum(-self.u, -self.v)

    def __sub__(self, other) -> "GoldenNum":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GoldenNum(self.u - o.u, self.v - o.v)

    def __rsub__(self, other) -> "GoldenNum":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> "GoldenNum":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        # (u1 + v1 rho)(u2 + v2 rho), rho^2 = 1 - rho
        return GoldenNum(
            self.u * o.u + self.v * o.v,
            self.u * o.v + self.v * o.u - self.v * o.v,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GoldenNum":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        # conjugate rho' = -1 - rho; norm (u + v rho)(u + v rho') = u^2 - uv - v^2
        norm = o.u * o.u - o.u * o.v - o.v * o.v
        if norm == 0:
            raise ZeroDivisionError("division by zero in the golden ring")
        conj = GoldenNum(o.u - o.v, -o.v)
        num = self * conj
        return GoldenNum(num.u / norm, num.v / norm)

    def __rtruediv__(self, other) -> "GoldenNum":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "GoldenNum":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = GoldenNum(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __abs__(self) -> "GoldenNum":
        return -self if self._sign() < 0 else self

    def __float__(self) -> float:
        return float(self.u) + float(self.v) * _RHO_FLOAT

    def __repr__(self) -> str:
        if self.v == 0:
            return f"GoldenNum({self.u})"
        return f"GoldenNum({self.u}, {self.v})"
