"""Multiplicative cascades on b-adic cells of [0,1].

Two rules are supported.  A stationary cascade splits every cell by the same
ratio vector.  A chain cascade (base 3) starts from the uniform 1/3 split and
re-weights a nested chain of cells: for each scheduled level n_j the chain
enters the cell [3^-n_j, 2*3^-n_j] and follows middle children for n_j + 1
further levels; while inside, the middle child receives ratio p_j and each
flanking child (1 - p_j)/2.  The point 3^-n_j * 3/2 is the common midpoint of
every cell on chain j.

Ball queries delegate to the digit-walk kernels; everything here is exact
bookkeeping around them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..enclosure import Enclosure, EmptyBallError
from ..kernels import interval_mass_enclosure, suggested_cap
from .base import as_fraction


def _level_of(radius: Fraction, base: int) -> int:
    """Smallest n with base^-n <= radius (at least 1)."""
    n = max(int(-math.log(float(radius)) / math.log(base)), 1)
    while Fraction(1, base**n) > radius:
        n += 1
    while n > 1 and Fraction(1, base ** (n - 1)) <= radius:
        n -= 1
    return n


class _CascadeCommon:
    base: int

    def _ratio_tuple(self) -> tuple[Fraction, ...]:
        raise NotImplementedError

    def _windows(self) -> tuple[tuple[int, Fraction], ...]:
        return ()

    def _max_ratio(self) -> float:
        raise NotImplementedError

    def _cap_for(self, level: int) -> int:
        return suggested_cap(level, self._max_ratio())

    def interval_measure(self, a: Fraction, c: Fraction, cap: int | None = None) -> Enclosure:
        """Enclosure of the cascade mass of the open interval (a, c)."""
        a = as_fraction(a)
        c = as_fraction(c)
        if cap is None:
            level = _level_of(max(c - a, Fraction(1, 2**60)), self.base)
            cap = self._cap_for(level)
        return interval_mass_enclosure(
            self.base, self._ratio_tuple(), a, c, cap, self._windows()
        )

    def ball_measure(self, z: Fraction, radius: Fraction) -> Enclosure:
        z = as_fraction(z)
        radius = as_fraction(radius)
        if radius <= 0:
            raise ValueError("radius must be positive")
        out = self.interval_measure(z - radius, z + radius)
        if out.is_empty():
            raise EmptyBallError(
                f"ball around {float(z)} with radius {float(radius)} has no mass"
            )
        return out

    def total_mass(self) -> Enclosure:
        return Enclosure.from_value(1)


@dataclass(frozen=True)
class StationaryCascadeSpec(_CascadeCommon):
    """Same child-ratio vector at every cell."""

    base: int
    ratios: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ratios", tuple(as_fraction(q) for q in self.ratios))
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if len(self.ratios) != self.base:
            raise ValueError("need one ratio per digit")
        if any(q < 0 for q in self.ratios):
            raise ValueError("ratios must be nonnegative")
        if sum(self.ratios) != 1:
            raise ValueError("ratios must sum to 1")

    def _ratio_tuple(self) -> tuple[Fraction, ...]:
        return self.ratios

    def _max_ratio(self) -> float:
        return float(max(self.ratios))

    def cell_measure(self, word: tuple[int, ...]) -> Fraction:
        """Exact mass of the cell addressed by the digit word."""
        out = Fraction(1)
        for d in word:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")
            out *= self.ratios[d]
        return out

    def cell_log_measure(self, word: tuple[int, ...]) -> float:
        """log of cell_measure, summed digit by digit (underflow-safe)."""
        total = 0.0
        for d in word:
            q = self.ratios[d]
            if q == 0:
                return float("-inf")
            total += math.log(q.numerator) - math.log(q.denominator)
        return total

    def support_net(self, resolution: Fraction) -> list[Fraction]:
        resolution = as_fraction(resolution)
        level = _level_of(resolution, self.base)
        positive = [d for d in range(self.base) if self.ratios[d] > 0]
        cells = [Fraction(0)]
        width = Fraction(1)
        for _ in range(level):
            width /= self.base
            cells = [lo + d * width for lo in cells for d in positive]
            if len(cells) > 100_000:
                raise ValueError("support net too large at this resolution")
        out: list[Fraction] = []
        for lo in cells:
            out.append(lo)
            out.append(lo + width)
        return sorted(set(out))

    def hint_centers(self, radius: Fraction) -> list[Fraction]:
        radius = as_fraction(radius)
        out: list[Fraction] = []
        for k in range(1, self.base):
            edge = Fraction(k, self.base)
            out.extend([edge, edge - radius, edge + radius, edge - radius / 2])
        return [x for x in out if 0 <= x <= 1]

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        # extreme points repeat the extreme positive digits forever
        positive = [d for d in range(self.base) if self.ratios[d] > 0]
        return (
            Fraction(positive[0], self.base - 1),
            Fraction(positive[-1], self.base - 1),
        )


@dataclass(frozen=True)
class ChainCascadeSpec(_CascadeCommon):
    """Uniform triadic cascade re-weighted along scheduled middle chains."""

    schedule: tuple[tuple[int, Fraction], ...]
    base: int = 3

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "schedule",
            tuple((int(n), as_fraction(p)) for n, p in self.schedule),
        )
        if self.base != 3:
            raise ValueError("chain cascades are defined on base 3")
        prev_end = 0
        for n, p in self.schedule:
            if n < 2:
                raise ValueError("chain levels start at 2")
            if n <= prev_end:
                raise ValueError("chain level ranges must be disjoint and increasing")
            if not 0 < p <= 1:
                raise ValueError("chain ratios must lie in (0, 1]")
            prev_end = 2 * n + 1

    @staticmethod
    def geometric_schedule(
        first: int, factor: int, count: int, ratios
    ) -> tuple[tuple[int, Fraction], ...]:
        """Levels n_1, f*n_1, f^2*n_1, ... paired with the given ratios.

        A single ratio is repeated; factor >= 3 keeps the ranges disjoint.
        """
        if factor < 3:
            raise ValueError("factor must be at least 3 to separate chains")
        if not isinstance(ratios, (list, tuple)):
            ratios = [ratios] * count
        if len(ratios) != count:
            raise ValueError("need one ratio per chain")
        levels = [first * factor**k for k in range(count)]
        return tuple((n, as_fraction(p)) for n, p in zip(levels, ratios))

    def _ratio_tuple(self) -> tuple[Fraction, ...]:
        third = Fraction(1, 3)
        return (third, third, third)

    def _windows(self) -> tuple[tuple[int, Fraction], ...]:
        return self.schedule

    def _max_ratio(self) -> float:
        worst = Fraction(1, 3)
        for _, p in self.schedule:
            worst = max(worst, p, (1 - p) / 2)
        return float(worst)

    def _decay_ratio(self) -> float:
        # worst per-level mass ratio over the levels that do shrink
        worst = Fraction(1, 3)
        for _, p in self.schedule:
            if p < 1:
                worst = max(worst, p, (1 - p) / 2)
        return float(worst)

    def _cap_for(self, level: int) -> int:
        # p = 1 windows preserve the boundary cell's mass for n + 2 levels,
        # so the walk must outrun every stalling window it can reach
        base_cap = suggested_cap(level, self._decay_ratio())
        cap = base_cap
        while True:
            stall = sum(n + 2 for n, p in self.schedule if p == 1 and n <= cap)
            if base_cap + stall == cap:
                return cap
            cap = base_cap + stall

    def chain_midpoint(self, j: int) -> Fraction:
        """Common midpoint of every cell on chain j."""
        n = self.schedule[j][0]
        return Fraction(3, 2) * Fraction(1, 3**n)

    def _digit_ratios(self, word: tuple[int, ...]):
        starts = {n: j for j, (n, _) in enumerate(self.schedule)}
        rem, idx, zero = 0, -1, True
        for lvl, d in enumerate(word, start=1):
            if not 0 <= d < 3:
                raise ValueError(f"digit {d} out of range for base 3")
            if rem > 0:
                p = self.schedule[idx][1]
                ratio = p if d == 1 else (1 - p) / 2
                rem, idx = (rem - 1, idx) if d == 1 else (0, -1)
            else:
                ratio = Fraction(1, 3)
                if zero and d == 1 and lvl in starts:
                    j = starts[lvl]
                    rem, idx = self.schedule[j][0] + 1, j
            zero = zero and d == 0
            yield ratio

    def cell_measure(self, word: tuple[int, ...]) -> Fraction:
        """Exact mass of the cell addressed by the digit word."""
        out = Fraction(1)
        for ratio in self._digit_ratios(word):
            out *= ratio
        return out

    def cell_log_measure(self, word: tuple[int, ...]) -> float:
        total = 0.0
        for ratio in self._digit_ratios(word):
            if ratio == 0:
                return float("-inf")
            total += math.log(ratio.numerator) - math.log(ratio.denominator)
        return total

    def support_net(self, resolution: Fraction) -> list[Fraction]:
        resolution = as_fraction(resolution)
        level = _level_of(resolution, 3)
        # enumerate positive-mass cells level by level, tracking chain state
        width = Fraction(1)
        cells: list[tuple[Fraction, int, int, bool]] = [(Fraction(0), 0, -1, True)]
        starts = {n: j for j, (n, _) in enumerate(self.schedule)}
        for lvl in range(1, level + 1):
            width /= 3
            nxt: list[tuple[Fraction, int, int, bool]] = []
            for lo, rem, idx, zero in cells:
                for d in range(3):
                    if rem > 0:
                        p = self.schedule[idx][1]
                        ratio_pos = p > 0 if d == 1 else p < 1
                        c_rem, c_idx = (rem - 1, idx) if d == 1 else (0, -1)
                    else:
                        ratio_pos = True
                        if zero and d == 1 and lvl in starts:
                            j = starts[lvl]
                            c_rem, c_idx = self.schedule[j][0] + 1, j
                        else:
                            c_rem, c_idx = 0, -1
                    if ratio_pos:
                        nxt.append((lo + d * width, c_rem, c_idx, zero and d == 0))
            cells = nxt
            if len(cells) > 200_000:
                raise ValueError("support net too large at this resolution")
        out: list[Fraction] = []
        for lo, _, _, _ in cells:
            out.append(lo)
            out.append(lo + width)
        return sorted(set(out))

    def hint_centers(self, radius: Fraction) -> list[Fraction]:
        radius = as_fraction(radius)
        out: list[Fraction] = []
        for j in range(len(self.schedule)):
            x = self.chain_midpoint(j)
            out.extend([x, x - radius, x + radius])
        return [x for x in out if 0 <= x <= 1]

    def support_bounds(self) -> tuple[Fraction, Fraction]:
        return (Fraction(0), Fraction(1))
