"""Net-interval levels for equicontractive self-similar systems on [0, 1].

Level-n net points are the images of 0 and 1 under all length-n map words;
net intervals are the gaps between consecutive points.  Each interval keeps
its covering list: the cylinders whose interior meets it, merged by identical
position with accumulated mass.  Children are derived from parent covering
lists alone, never by enumerating words, so the per-level cost is driven by
the interval count and the (bounded, when the system is finite type) state
multiplicity.

Every geometric quantity is an exact scalar: Fraction, or GoldenNum when the
contraction ratio lives in the golden ring.  Masses are exact Fractions.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

from ..enclosure import Enclosure, EmptyBallError, PrecisionError
from ..measures.base import as_fraction
from ..measures.selfsimilar import SelfSimilarSpec
from .exactnum import GoldenNum


class FiniteTypeViolation(RuntimeError):
    """Distinct neighbor states kept multiplying past the configured bound."""


@dataclass(frozen=True)
class NetInterval:
    """One level-n net interval with its merged covering list.

    ``coverings`` holds (position, mass) pairs sorted by position: the
    cylinder [position, position + r^n] has interior meeting (left, right)
    and mass the sum of p_w over the words landing there.
    """

    left: object
    right: object
    coverings: tuple

    @property
    def length(self):
        return self.right - self.left

    @property
    def p_value(self) -> Fraction:
        return sum((m for _, m in self.coverings), Fraction(0))

    def signature(self, inv_scale):
        """Scale-free neighbor state: normalized length plus the normalized
        covering offsets.  Masses are data carried on top of the state, not
        part of it; recurrence of these geometric states is what finite type
        means operationally."""
        norm_len = (self.right - self.left) * inv_scale
        offs = tuple((pos - self.left) * inv_scale for pos, _ in self.coverings)
        return (norm_len, offs)


@dataclass(frozen=True)
class NetLevel:
    n: int
    scale: object  # r^n, exact
    intervals: tuple


@dataclass(frozen=True)
class NetLevels:
    """Built levels 0..n_max plus the census used by the health checks."""

    spec: SelfSimilarSpec
    ratio: object
    levels: tuple
    window: tuple | None
    state_counts: tuple
    last_new_state_level: int
    _pq_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_max(self) -> int:
        return len(self.levels) - 1

    def interval_index(self, n: int, x) -> int:
        """Index of the level-n interval containing x (ties go right)."""
        lefts = [iv.left for iv in self.levels[n].intervals]
        i = bisect.bisect_right(lefts, x) - 1
        if i < 0 or not self.levels[n].intervals[i].right > x:
            if i >= 0 and self.levels[n].intervals[i].right == x:
                return i
            raise ValueError("point not inside any kept interval at this level")
        return i

    def adjacent_pair_at(self, n: int, x) -> tuple[int, int]:
        """Indices (i, i+1) of the two intervals sharing the net point x."""
        ivs = self.levels[n].intervals
        lefts = [iv.left for iv in ivs]
        i = bisect.bisect_left(lefts, x)
        if i == 0 or i == len(ivs) or ivs[i].left != x or ivs[i - 1].right != x:
            raise ValueError("x is not an interior net point at this level")
        return i - 1, i


def _require_unit_support(spec: SelfSimilarSpec):
    h0, h1 = spec.hull()
    if not (h0 == 0 and h1 == 1):
        raise ValueError("net levels need attractor hull exactly [0, 1]")
    pieces = sorted(spec.map_intervals(), key=lambda iv: iv[0])
    cover_to = pieces[0][1]
    if not pieces[0][0] == 0:
        raise ValueError("map images must cover [0, 1]")
    for lo, hi in pieces[1:]:
        if lo > cover_to:
            raise ValueError("map images must cover [0, 1] without gaps")
        if hi > cover_to:
            cover_to = hi
    if not cover_to == 1:
        raise ValueError("map images must cover [0, 1]")


def build_net_levels(
    spec: SelfSimilarSpec,
    n_max: int,
    window: tuple | None = None,
    max_intervals: int = 600_000,
    state_bound: int = 4096,
) -> NetLevels:
    """Build levels 0..n_max of exact net intervals with covering lists.

    ``window`` = (center, pad) keeps, at each level n, only the intervals
    whose interior meets [center - pad*r^n, center + pad*r^n].  The kept set
    shrinks with the window, and a kept interval's parent always met the
    wider parent window, so covering lists stay complete for every interval
    retained.
    """
    ratios = spec.ratios
    r = ratios[0]
    for rj in ratios[1:]:
        if not rj == r:
            raise ValueError("net levels require one common contraction ratio")
    _require_unit_support(spec)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")

    offsets = spec.offsets
    probs = spec.probs
    one = r / r  # exact 1 in the scalar type of r
    zero = one - one

    root = NetInterval(left=zero, right=one, coverings=((zero, Fraction(1)),))
    levels = [NetLevel(n=0, scale=one, intervals=(root,))]

    seen_signatures: set = set()
    state_counts = [1]
    last_new = 0
    inv_r = one / r
    seen_signatures.add(root.signature(one))

    scale_prev = one
    for n in range(1, n_max + 1):
        scale_n = scale_prev * r
        if window is not None:
            center, pad = window
            w_lo = center - pad * scale_n
            w_hi = center + pad * scale_n
        new_intervals = []
        for parent in levels[n - 1].intervals:
            candidates = []
            for pos, mass in parent.coverings:
                for d, p in zip(offsets, probs):
                    candidates.append((pos + scale_prev * d, mass * p))
            pts = {parent.left, parent.right}
            for cpos, _ in candidates:
                if parent.left < cpos < parent.right:
                    pts.add(cpos)
                cend = cpos + scale_n
                if parent.left < cend < parent.right:
                    pts.add(cend)
            pts = sorted(pts)
            for a, b in zip(pts, pts[1:]):
                if window is not None and not (b > w_lo and a < w_hi):
                    continue
                merged: dict = {}
                for cpos, cmass in candidates:
                    if cpos <= a and cpos + scale_n >= b:
                        if cpos in merged:
                            merged[cpos] += cmass
                        else:
                            merged[cpos] = cmass
                if not merged:
                    raise ValueError("uncovered net interval; support is not [0, 1]")
                covs = tuple(sorted(merged.items(), key=lambda kv: kv[0]))
                new_intervals.append(NetInterval(left=a, right=b, coverings=covs))
        new_intervals.sort(key=lambda iv: iv.left)
        if len(new_intervals) > max_intervals:
            raise MemoryError(
                f"level {n} has {len(new_intervals)} intervals, over the "
                f"{max_intervals} cap; use a window or a smaller n_max"
            )
        inv_scale = inv_r**n
        fresh = 0
        sigs_here = set()
        for iv in new_intervals:
            sig = iv.signature(inv_scale)
            sigs_here.add(sig)
            if sig not in seen_signatures:
                seen_signatures.add(sig)
                fresh += 1
        if fresh:
            last_new = n
        if len(seen_signatures) > state_bound:
            raise FiniteTypeViolation(
                f"{len(seen_signatures)} distinct neighbor states by level {n}; "
                "finite-type violation suspected"
            )
        state_counts.append(len(sigs_here))
        levels.append(NetLevel(n=n, scale=scale_n, intervals=tuple(new_intervals)))
        scale_prev = scale_n

    return NetLevels(
        spec=spec,
        ratio=r,
        levels=tuple(levels),
        window=window,
        state_counts=tuple(state_counts),
        last_new_state_level=last_new,
    )


def net_interval_pq(net: NetLevels, n: int, index: int, probe: int = 8):
    """Exact (Q, P) word-mass sums at depth n + probe for one net interval.

    P sums p_w over depth-(n+probe) words whose cylinder interior meets the
    interval, except that a cylinder still straddling a boundary at the probe
    depth contributes its whole mass (a sound overcount); Q sums p_w over
    cylinders contained in the closed interval.  Both are exact Fractions,
    and Q <= mu(interval) <= P.
    """
    if probe < 0:
        raise ValueError("probe depth must be nonnegative")
    if n + probe > net.n_max:
        raise ValueError("probe depth overflows the built levels")
    key = (n, index, probe)
    cached = net._pq_cache.get(key)
    if cached is not None:
        return cached
    delta = net.levels[n].intervals[index]
    left, right = delta.left, delta.right
    r = net.ratio
    offsets = net.spec.offsets
    probs = net.spec.probs
    q = Fraction(0)
    p = Fraction(0)
    scale_n = net.levels[n].scale
    stack = [(pos, scale_n, mass, 0) for pos, mass in delta.coverings]
    while stack:
        pos, sc, mass, d = stack.pop()
        end = pos + sc
        if pos >= left and end <= right:
            q += mass
            p += mass
            continue
        if not (pos < right and end > left):
            continue
        if d == probe:
            p += mass
            continue
        sc_child = sc * r
        for j in range(len(offsets) - 1, -1, -1):
            stack.append((pos + sc * offsets[j], sc_child, mass * probs[j], d + 1))
    net._pq_cache[key] = (q, p)
    return q, p


def net_interval_measure_enclosure(
    net: NetLevels, n: int, index: int, probe: int = 8
) -> Enclosure:
    """Two-sided enclosure [Q, P] of the measure of one net interval."""
    q, p = net_interval_pq(net, n, index, probe)
    return Enclosure.from_bounds(q, p)


def finite_type_ball_oracle(net: NetLevels, z, radius, probe: int = 8) -> Enclosure:
    """Ball-measure enclosure assembled from net-interval enclosures.

    Lower bound sums Q over net intervals inside the closed ball (equal to
    the open-ball measure for these atomless systems); upper bound sums P
    over intervals meeting the closed ball.
    """
    if isinstance(radius, (int, float, str)):
        radius = as_fraction(radius)
    if net.window is not None:
        raise ValueError("ball oracle requires a full (unwindowed) build")
    r_f = float(net.ratio)
    if float(radius) < r_f ** net.n_max:
        raise PrecisionError("radius below the resolution of the built levels")
    n = 0
    while n < net.n_max and r_f ** (n + 1) >= float(radius):
        n += 1
    n = min(n, net.n_max - probe)
    lo = z - radius
    hi = z + radius
    q_sum = Fraction(0)
    p_sum = Fraction(0)
    hit = False
    for i, iv in enumerate(net.levels[n].intervals):
        if iv.right < lo or iv.left > hi:
            continue
        hit = True
        q, p = net_interval_pq(net, n, i, probe)
        p_sum += p
        if iv.left >= lo and iv.right <= hi:
            q_sum += q
    if not hit:
        raise EmptyBallError(f"ball around {z} with radius {radius} misses [0, 1]")
    return Enclosure.from_bounds(q_sum, min(p_sum, Fraction(1)))


@dataclass(frozen=True)
class FiniteTypeMeasure:
    """MeasureOracle facade over a full net-level build."""

    net: NetLevels
    probe: int = 8

    def ball_measure(self, z, radius) -> Enclosure:
        return finite_type_ball_oracle(self.net, z, radius, probe=self.probe)

    def support_net(self, resolution) -> list:
        res = float(resolution)
        n = 0
        while n < self.net.n_max and float(self.net.ratio) ** n > res:
            n += 1
        ivs = self.net.levels[n].intervals
        pts = [iv.left for iv in ivs]
        pts.append(ivs[-1].right)
        return pts

    def hint_centers(self, radius) -> list:
        return []

    def support_bounds(self):
        h = self.net.levels[0].intervals[0]
        return (h.left, h.right)

    def total_mass(self) -> Enclosure:
        return Enclosure.from_value(1)


@dataclass(frozen=True)
class GapCheckReport:
    gap_constant: float
    gap_constant_exact: object
    gap_stabilized_at: int
    offset_value_count: int
    offset_values_stabilized_at: int
    extension_depth: int
    max_multiplicity: int
    state_counts: tuple
    states_stabilized_at: int


def finite_type_gap_check(net: NetLevels) -> GapCheckReport:
    """Census of the finite-type constants actually observed in the build.

    gap constant a: min over built levels of (interval length)/r^n.
    offset values: distinct r^-n-normalized differences between covering
    positions sharing one interval.  Extension depth is 1 by construction
    (equicontractive words grow one letter per level).  Multiplicity is the
    largest merged covering list.  Each comes with the level where its
    running value last changed.
    """
    one = net.ratio / net.ratio
    inv_r = one / net.ratio
    a_best = None
    a_level = 0
    f_values: set = set()
    f_level = 0
    mult = 0
    inv_scale = one
    for n in range(1, net.n_max + 1):
        inv_scale = inv_scale * inv_r
        for iv in net.levels[n].intervals:
            norm_len = iv.length * inv_scale
            if a_best is None or norm_len < a_best:
                a_best = norm_len
                a_level = n
            covs = iv.coverings
            if len(covs) > mult:
                mult = len(covs)
            for i in range(len(covs)):
                for j in range(i + 1, len(covs)):
                    diff = (covs[j][0] - covs[i][0]) * inv_scale
                    if diff not in f_values:
                        f_values.add(diff)
                        f_level = n
    return GapCheckReport(
        gap_constant=float(a_best),
        gap_constant_exact=a_best,
        gap_stabilized_at=a_level,
        offset_value_count=len(f_values),
        offset_values_stabilized_at=f_level,
        extension_depth=1,
        max_multiplicity=mult,
        state_counts=net.state_counts,
        states_stabilized_at=net.last_new_state_level,
    )


def dyadic_system(p_left=Fraction(2, 3)) -> SelfSimilarSpec:
    """Two maps halving [0, 1], biased mass p_left on the left half."""
    p_left = as_fraction(p_left)
    return SelfSimilarSpec(
        ratios=(Fraction(1, 2), Fraction(1, 2)),
        offsets=(Fraction(0), Fraction(1, 2)),
        probs=(p_left, 1 - p_left),
        separation="finite_type",
    )


def golden_bernoulli(p=Fraction(7, 10)) -> SelfSimilarSpec:
    """Biased Bernoulli convolution with the golden contraction ratio."""
    p = as_fraction(p)
    rho = GoldenNum.rho()
    return SelfSimilarSpec(
        ratios=(rho, rho),
        offsets=(GoldenNum(0), GoldenNum(1) - rho),
        probs=(p, 1 - p),
        separation="finite_type",
    )


def central_overlap_system(probs=None) -> SelfSimilarSpec:
    """Four maps of ratio 1/3 with one overlapping shift of 1/6."""
    if probs is None:
        probs = (Fraction(1, 4),) * 4
    return SelfSimilarSpec(
        ratios=(Fraction(1, 3),) * 4,
        offsets=(Fraction(0), Fraction(1, 6), Fraction(1, 3), Fraction(2, 3)),
        probs=probs,
        separation="finite_type",
    )
