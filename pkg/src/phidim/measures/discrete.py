"""Purely atomic measures: an optional atom at 0 plus a decaying atom train.

Positions are n^-lam (lam a positive integer, so every position is an exact
rational) or lam^-n (lam rational > 1).  Weights are n^-beta or beta^-n with
beta > 1 and are used unnormalized; the total mass is p0 + sum of weights.

Ball queries resolve the index window hit by the open ball with exact integer
comparisons, then sum weights three ways: exact rationals for short integer-
exponent windows, correctly-rounded float sums with a directed slack factor
for long windows, and a midpoint-corrected integral enclosure for polynomial
tails.  The tail enclosure

    sum_{n >= A} n^-beta  in  [I - E, I],
    I = (A - 1/2)^(1-beta) / (beta - 1),  E = beta (A - 3/2)^(-beta-1) / 24

follows from the midpoint rule on unit intervals (convexity gives the upper
bound, the second-derivative correction the lower) and is strictly tighter
than the plain integral sandwich between A-1 and A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..enclosure import Enclosure, EmptyBallError
from .base import as_fraction

_FLOAT_SLACK = 2.0**-40  # covers accumulated libm error in long float sums
_EXACT_SUM_LIMIT = 64
_EXACT_GEOM_BITS = 1 << 22  # exact geometric sums up to ~0.5 MB integers


def _float_enclosure(value: float) -> Enclosure:
    if value <= 0.0:
        return Enclosure.zero()
    return Enclosure.from_bounds(value * (1.0 - _FLOAT_SLACK), value * (1.0 + _FLOAT_SLACK))


@dataclass(frozen=True)
class DiscreteSpec:
    """p0 at the origin plus atoms at a_n with weight w_n, n = 1, 2, ...

    truncate=N keeps only the first N atoms (a genuinely finite measure);
    enum_cap bounds how many terms any single query may enumerate before
    switching to tail enclosures.
    """

    position_kind: str  # "poly": a_n = n^-lam; "exp": a_n = lam^-n
    weight_kind: str  # "poly": w_n = n^-beta; "exp": w_n = beta^-n
    lam: Fraction
    beta: Fraction
    p0: Fraction = Fraction(0)
    truncate: int | None = None
    enum_cap: int = 10_000

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", as_fraction(self.lam))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "p0", as_fraction(self.p0))
        if self.position_kind not in ("poly", "exp"):
            raise ValueError("position_kind must be 'poly' or 'exp'")
        if self.weight_kind not in ("poly", "exp"):
            raise ValueError("weight_kind must be 'poly' or 'exp'")
        if self.position_kind == "poly":
            if self.lam <= 0:
                raise ValueError("polynomial positions need lam > 0")
            if self.lam.denominator != 1:
                raise ValueError(
                    "polynomial positions keep exact arithmetic only for integer lam"
                )
        else:
            if self.lam <= 1:
                raise ValueError("exponential positions need lam > 1")
        if self.beta <= 1:
            raise ValueError("weights need beta > 1")
        if self.p0 < 0:
            raise ValueError("p0 must be nonnegative")
        if self.truncate is not None and self.truncate < 1:
            raise ValueError("truncate must be a positive atom count")

    # -- exact positions and weights -------------------------------------

    def position(self, n: int) -> Fraction:
        if self.position_kind == "poly":
            return Fraction(1, n ** int(self.lam))
        return Fraction(1) / self.lam**n

    def weight_exact(self, n: int) -> Fraction:
        """Exact weight; only available for integer-exponent kinds."""
        if self.weight_kind == "poly":
            if self.beta.denominator != 1:
                raise ValueError("n^-beta is irrational for non-integer beta")
            return Fraction(1, n ** int(self.beta))
        return Fraction(1) / self.beta**n

    def _weight_float(self, n: int) -> float:
        if self.weight_kind == "poly":
            return n ** (-float(self.beta))
        return float(self.beta) ** (-n)

    @property
    def poly_poly_exponents(self) -> tuple[Fraction, Fraction] | None:
        """(s, t) = ((beta-1)/lam, beta/(lam+1)) in the double-poly case."""
        if self.position_kind == "poly" and self.weight_kind == "poly":
            return ((self.beta - 1) / self.lam, self.beta / (self.lam + 1))
        return None

    # -- index-window resolution ------------------------------------------

    def _position_below(self, n: int, bound: Fraction) -> bool:
        """Exact test a_n < bound."""
        if bound <= 0:
            return False
        if self.position_kind == "poly":
            lam = int(self.lam)
            # n^-lam < p/q  <=>  q < p * n^lam
            return bound.denominator < bound.numerator * n**lam
        # lam^-n < bound  <=>  1 < bound * lam^n
        return 1 < bound * self.lam**n

    def _first_index_below(self, bound: Fraction) -> int | None:
        """Smallest n with a_n < bound, or None if no atom is that small."""
        if bound <= 0:
            return None
        if self._position_below(1, bound):
            return 1
        # float guess, then exact adjustment in both directions
        fb = float(bound)
        if self.position_kind == "poly":
            guess = int(fb ** (-1.0 / float(self.lam))) + 1 if fb > 0 else 1
        else:
            guess = int(-math.log(fb) / math.log(float(self.lam))) + 1 if fb > 0 else 1
        n = max(guess, 2)
        while self._position_below(n - 1, bound) and n > 2:
            n -= 1
        while not self._position_below(n, bound):
            n += 1
        return n

    def _index_window(self, a: Fraction, c: Fraction) -> tuple[int, int | None] | None:
        """Indices n with a < a_n < c, as [n_first, n_last] (None = infinite)."""
        n_first = self._first_index_below(c)
        if n_first is None:
            return None
        if a <= 0:
            n_last: int | None = None
        else:
            m = self._first_index_below(a)  # first atom with a_n < a
            if m is None:
                return None  # even a_1 <= a: window above all atoms
            n_last = m - 1
            # a_m < a <= a_{m-1}: drop the boundary atom if a_{m-1} == a
            while n_last >= n_first and self.position(n_last) <= a:
                n_last -= 1
            if n_last < n_first:
                return None
        if self.truncate is not None:
            if n_first > self.truncate:
                return None
            if n_last is None or n_last > self.truncate:
                n_last = self.truncate
        return (n_first, n_last)

    # -- weight sums -------------------------------------------------------

    def _poly_tail(self, start: int) -> Enclosure:
        """Enclosure of sum_{n >= start} n^-beta (untruncated)."""
        b = float(self.beta)
        if start < 2:
            head = self._sum_range(start, 1) if start <= 1 else Enclosure.zero()
            return head + self._poly_tail(2)
        integral = (start - 0.5) ** (1.0 - b) / (b - 1.0)
        err = b * (start - 1.5) ** (-b - 1.0) / 24.0
        lo = max(integral - err, 0.0) * (1.0 - _FLOAT_SLACK)
        hi = integral * (1.0 + _FLOAT_SLACK)
        return Enclosure.from_bounds(lo, hi)

    def _geom_bits(self, n: int) -> int:
        """Bit budget of the exact geometric term q^n."""
        per = max(self.beta.numerator.bit_length(), self.beta.denominator.bit_length())
        return (n + 1) * per

    def _geom_log(self, n1: int, n2: int | None) -> Enclosure:
        """Geometric window sum in log space, for windows whose exact
        form would need astronomically many bits."""
        ln_q = -math.log(float(self.beta))
        den = math.log1p(-1.0 / float(self.beta))
        head = n1 * ln_q
        body = 0.0
        if n2 is not None:
            t = (n2 - n1 + 1) * ln_q
            if t > -740.0:
                body = math.log1p(-math.exp(t))
        log_mid = head + body - den
        # n1 * ln_q carries the dominant rounding error
        slack = (abs(head) + 4.0) * 2.0**-50
        return Enclosure(
            math.exp(log_mid - slack), math.exp(log_mid + slack),
            log_mid - slack, log_mid + slack,
        )

    def _sum_range(self, n1: int, n2: int) -> Enclosure:
        """Enclosure of sum_{n=n1..n2} w_n, n2 - n1 assumed enumerable."""
        if n2 < n1:
            return Enclosure.zero()
        if self.weight_kind == "exp":
            if self._geom_bits(n2) > _EXACT_GEOM_BITS:
                return self._geom_log(n1, n2)
            q = Fraction(1) / self.beta
            total = q**n1 * (1 - q ** (n2 - n1 + 1)) / (1 - q)
            return Enclosure.from_value(total)
        if self.beta.denominator == 1 and n2 - n1 < _EXACT_SUM_LIMIT:
            total = sum((self.weight_exact(n) for n in range(n1, n2 + 1)), Fraction(0))
            return Enclosure.from_value(total)
        return _float_enclosure(math.fsum(self._weight_float(n) for n in range(n1, n2 + 1)))

    def _sum_from(self, n1: int) -> Enclosure:
        """Enclosure of sum_{n >= n1} w_n (untruncated)."""
        if self.weight_kind == "exp":
            if self._geom_bits(n1) > _EXACT_GEOM_BITS:
                return self._geom_log(n1, None)
            q = Fraction(1) / self.beta
            return Enclosure.from_value(q**n1 / (1 - q))
        n1 = max(n1, 1)
        head_end = n1 + self.enum_cap - 1
        head = self._sum_range(n1, head_end)
        return head + self._poly_tail(head_end + 1)

    def weight_sum(self, n1: int, n2: int | None) -> Enclosure:
        """Enclosure of the window weight sum; n2=None means infinite."""
        if self.truncate is not None:
            n2 = self.truncate if n2 is None else min(n2, self.truncate)
        if n2 is None:
            return self._sum_from(n1)
        if n2 < n1:
            return Enclosure.zero()
        if self.weight_kind == "exp" or n2 - n1 <= self.enum_cap:
            return self._sum_range(n1, n2)
        # long finite window: difference of tails, rigorous on both sides
        upper = self._sum_from(n1)
        beyond = self._sum_from(n2 + 1)
        lo = max(upper.lo - beyond.hi, 0.0)
        hi = max(upper.hi - beyond.lo, lo)
        return Enclosure.from_bounds(lo, hi)

    # -- oracle interface ----------------------------------------------------

    def ball_measure(self, z: Fraction, radius: Fraction) -> Enclosure:
        z = as_fraction(z)
        radius = as_fraction(radius)
        if radius <= 0:
            raise ValueError("radius must be positive")
        a = z - radius
        c = z + radius
        total = Enclosure.zero()
        if self.p0 > 0 and a < 0 < c:
            total = total + Enclosure.from_value(self.p0)
        window = self._index_window(a, c)
        if window is not None:
            total = total + self.weight_sum(window[0], window[1])
        if total.is_empty():
            raise EmptyBallError(
                f"ball around {float(z)} with radius {float(radius)} contains no atoms"
            )
        return total

    def atoms(self) -> list[tuple[Fraction, Fraction]]:
        """Exact (position, weight) list; requires a truncated spec."""
        if self.truncate is None:
            raise ValueError("atoms() needs a truncated spec")
        out = []
        if self.p0 > 0:
            out.append((Fraction(0), self.p0))
        for n in range(1, self.truncate + 1):
            out.append((self.position(n), self.weight_exact(n)))
        return out

    def support_net(self, resolution: Fraction) -> list[Fraction]:
        resolution = as_fraction(resolution)
        if resolution <= 0:
            raise ValueError("resolution must be positive")
        centers: list[Fraction] = []
        last: Fraction | None = None
        n = 1
        limit = self.truncate if self.truncate is not None else self.enum_cap
        while n <= limit:
            pos = self.position(n)
            if pos * 2 <= resolution:
                break
            if last is None or last - pos >= resolution / 2:
                centers.append(pos)
                last = pos
            n += 1
        if self.p0 > 0 or self.truncate is None:
            centers.append(Fraction(0))
        elif not centers:
            centers.append(self.position(self.truncate))
        return centers

    def hint_centers(self, radius: Fraction) -> list[Fraction]:
        radius = as_fraction(radius)
        out = [Fraction(0)] if (self.p0 > 0 or self.truncate is None) else []
        limit = self.truncate
        m = self._first_index_below(radius)
        if self.position_kind == "exp":
            # linearly many atoms sit above the radius; include them all so
            # every probing scale sees its own mass-transition atom
            last = m if m is not None else limit
            if limit is not None:
                last = min(last, limit)
            out.extend(self.position(n) for n in range(1, (last or 0) + 1))
            return out
        n = 1
        # polynomial positions: the doubling train is already aligned with
        # geometric probe scales
        while limit is None or n <= limit:
            pos = self.position(n)
            out.append(pos)
            if pos < radius:
                break
            n *= 2
        # the mass profile transitions at the last atoms still above the
        # probe radius; the train skips them, so add that boundary explicitly
        if m is not None:
            for k in (m - 2, m - 1, m):
                if k >= 1 and (limit is None or k <= limit):
                    out.append(self.position(k))
        return out

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        hi = self.position(1)
        if self.truncate is not None and self.p0 == 0:
            return (self.position(self.truncate), hi)
        return (Fraction(0), hi)

    def total_mass(self) -> Enclosure:
        base = self.weight_sum(1, None)
        if self.p0 > 0:
            base = base + Enclosure.from_value(self.p0)
        return base
