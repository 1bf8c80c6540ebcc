"""Runtime invariant suite behind the ``verify`` subcommand.

Each check guards one documented invariant of one module.  A check returns
None on success or a short witness string locating the violation; raising
also counts as failure with the exception as witness.  Checks marked fast
form the ``--fast`` subset; the full run adds the estimator cross-checks
and the deeper exact-net computations.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .closedform import (
    box_frostman_bounds,
    discrete_phi_dimension,
    ssc_dimension_interval,
)
from .dimfunc import ScaleFunction, geometric_grid
from .estimate import (
    EstimationConfig,
    estimate_lower_phi_dim,
    estimate_minkowski_frostman,
    estimate_set_phi_dim,
    estimate_upper_phi_dim,
)
from .measures import (
    CentralCantorSpec,
    EmptyBallError,
    DiscreteSpec,
    LebesgueSpec,
    SelfSimilarSpec,
    StationaryCascadeSpec,
    local_dimension_estimate,
)
from .netintervals import (
    build_net_levels,
    central_overlap_system,
    dyadic_system,
    golden_bernoulli,
    net_interval_pq,
    phi_doubling_check,
)


@dataclass(frozen=True)
class CheckResult:
    module: str
    invariant: str
    passed: bool
    witness: str
    seconds: float


_REGISTRY: list = []


def _check(module: str, invariant: str, fast: bool):
    def wrap(fn):
        _REGISTRY.append((module, invariant, fast, fn))
        return fn

    return wrap


def _phi_ladder():
    """The bundled scale functions, ordered by pointwise size near 0."""
    return (
        ScaleFunction(kind="constant", delta=0.0),
        ScaleFunction(kind="inverse_log", c=1.0),
        ScaleFunction(kind="constant", delta=0.5),
        ScaleFunction(kind="constant", delta=1.0),
        ScaleFunction(kind="abs_log"),
    )


def _bundled_specs():
    """(name, spec, natural scan base) triples used across the suite."""
    return (
        ("lebesgue", LebesgueSpec(), 2),
        ("cantor third", CentralCantorSpec(schedule=(Fraction(1, 3),)), 3),
        (
            "biased ssc",
            SelfSimilarSpec(
                ratios=(Fraction(1, 3), Fraction(1, 3)),
                offsets=(Fraction(0), Fraction(2, 3)),
                probs=(Fraction(3, 4), Fraction(1, 4)),
            ),
            3,
        ),
        (
            "exp-exp discrete",
            DiscreteSpec(
                position_kind="exp",
                lam=Fraction(3),
                weight_kind="exp",
                beta=Fraction(2),
                p0=Fraction(0),
            ),
            3,
        ),
    )


# -- dimfunc -----------------------------------------------------------------


@_check("dimfunc", "scale function laws on geometric grids", fast=True)
def _dimfunc_laws():
    # the widest grid reaches 3^-60, so open the domain past the default floor
    floor = 1e-30
    for phi in (
        ScaleFunction(kind="constant", delta=0.0, domain_floor=floor),
        ScaleFunction(kind="inverse_log", c=1.0, domain_floor=floor),
        ScaleFunction(kind="constant", delta=0.5, domain_floor=floor),
        ScaleFunction(kind="constant", delta=1.0, domain_floor=floor),
        ScaleFunction(kind="abs_log", domain_floor=floor),
        ScaleFunction(kind="psi", domain_floor=floor),
        ScaleFunction(kind="theta", theta=0.5, domain_floor=floor),
        ScaleFunction(kind="table", points=((0.5, 0.3), (0.01, 0.8)), domain_floor=floor),
    ):
        for b in (2, 3):
            grid = geometric_grid(b, 60)
            prev = None
            for x in grid:
                val = phi(x)
                if not val >= 0.0:
                    return f"{phi.kind}: negative value {val} at x={x}"
                cur = math.log(x) * (1.0 + val)
                if prev is not None and not cur < prev:
                    return f"{phi.kind}: x^(1+phi) not strictly decreasing at x={x} (base {b})"
                prev = cur
    return None


@_check("dimfunc", "depth weight equals n times the value at r^n", fast=True)
def _dimfunc_depth_weight():
    for phi in _phi_ladder():
        for b in (2, 3):
            r = 1.0 / b
            for n in (1, 5, 17, 40):
                direct = n * phi(r**n)
                if phi.depth_weight(n, r) != direct:
                    return f"{phi.kind}: depth_weight({n}) != n*phi(r^n) (base {b})"
    return None


@_check("dimfunc", "constant kind inverse limsup times delta is one", fast=True)
def _dimfunc_constant_L():
    for delta in (0.25, 0.5, 1.0, 2.0):
        phi = ScaleFunction(kind="constant", delta=delta)
        if phi.metadata().inv_limsup * delta != 1.0:
            return f"delta={delta}: L*delta != 1"
    return None


# -- measures ----------------------------------------------------------------


def _sample_centers(spec, count: int = 4):
    pool = spec.hint_centers(Fraction(1, 2**7))
    seen = sorted(set(pool))
    return seen[:count] if seen else [Fraction(1, 2)]


def _support_points(spec, count: int = 3):
    """Points guaranteed on (or next to) the support, spread across it."""
    net = sorted(set(spec.support_net(Fraction(1, 2**8))))
    if not net:
        return [Fraction(1, 2)]
    picks = {net[0], net[len(net) // 2], net[-1]}
    return sorted(picks)[:count]


@_check("measures", "ball enclosures nest as the radius grows", fast=True)
def _measures_nesting():
    radii = [Fraction(1, 2**k) for k in range(1, 10)]
    for name, spec, base in _bundled_specs():
        for z in _sample_centers(spec):
            prev_lo = None
            for r in reversed(radii):  # increasing radius
                try:
                    enc = spec.ball_measure(z, r)
                    lo, hi = enc.lo, enc.hi
                except EmptyBallError:
                    lo, hi = 0.0, 0.0
                if prev_lo is not None and not prev_lo <= hi + 1e-15:
                    return f"{name}: lo at smaller radius exceeds hi at {float(r)}"
                prev_lo = lo
    return None


@_check("measures", "a ball past the diameter captures total mass", fast=True)
def _measures_total_mass():
    for name, spec, base in _bundled_specs():
        lo, hi = spec.support_bounds()
        enc = spec.ball_measure(Fraction(lo + hi) / 2, Fraction(hi - lo) + 1)
        if not (enc.lo <= 1.0 <= enc.hi and enc.hi - enc.lo < 1e-9):
            return f"{name}: total-mass enclosure [{enc.lo}, {enc.hi}]"
    return None


@_check("measures", "every ball around an atom keeps at least its mass", fast=True)
def _measures_atom_floor():
    spec = DiscreteSpec(
        position_kind="poly",
        lam=Fraction(1),
        weight_kind="poly",
        beta=Fraction(2),
        p0=Fraction(1, 10),
        truncate=12,
    )
    for pos, mass in spec.atoms():
        for r in (Fraction(1, 10**6), Fraction(1, 2**40)):
            enc = spec.ball_measure(pos, r)
            if not enc.lo >= float(mass) * (1.0 - 1e-12):
                return f"ball at atom {pos} radius {r} lo={enc.lo} < mass {float(mass)}"
    return None


@_check("measures", "cascade children sum exactly to their parent", fast=True)
def _measures_cascade_conservation():
    spec = StationaryCascadeSpec(base=2, ratios=(Fraction(2, 3), Fraction(1, 3)))
    for level in (1, 3, 6):
        for code in range(2**level):
            word = tuple((code >> (level - 1 - i)) & 1 for i in range(level))
            parent = spec.cell_measure(word)
            kids = sum(spec.cell_measure(word + (d,)) for d in (0, 1))
            if kids != parent:
                return f"cell {word}: children sum {kids} != {parent}"
    return None


@_check("measures", "Lebesgue balls double with factor at most four", fast=True)
def _measures_lebesgue_doubling():
    spec = LebesgueSpec()
    for z in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(9, 10), Fraction(1)):
        for k in range(1, 12):
            r = Fraction(1, 2**k)
            big = spec.ball_measure(z, 2 * r)
            small = spec.ball_measure(z, r)
            if not big.hi <= 4.0 * small.lo + 1e-15:
                return f"z={z} r={float(r)}: mu(2R)={big.hi} > 4*mu(R)={small.lo}"
    return None


@_check("measures", "Cantor ball mass grows eightfold over two net levels", fast=False)
def _measures_cantor_growth():
    spec = CentralCantorSpec(schedule=(Fraction(1, 3),))
    centers = spec.support_net(Fraction(1, 3**12))
    for z in centers:
        for k in range(1, 9):
            big = spec.ball_measure(z, Fraction(1, 3**k))
            small = spec.ball_measure(z, Fraction(1, 3 ** (k + 4)))
            if not big.lo >= 8.0 * small.hi - 1e-12:
                return f"z={float(z)} R=3^-{k}: lo {big.lo} < 8*hi {small.hi}"
    return None


# -- netintervals ------------------------------------------------------------


def _bundled_systems():
    return (
        ("dyadic biased", dyadic_system(Fraction(2, 3)), 10),
        ("golden biased", golden_bernoulli(Fraction(7, 10)), 10),
        ("central overlap", central_overlap_system(), 8),
    )


@_check("netintervals", "net intervals tile the unit interval exactly", fast=True)
def _net_tiling():
    for name, spec, n_max in _bundled_systems():
        net = build_net_levels(spec, n_max)
        for n in range(1, n_max + 1):
            ivs = net.levels[n].intervals
            if not (ivs[0].left == 0 and ivs[-1].right == 1):
                return f"{name} level {n}: ends not 0 and 1"
            for a, b in zip(ivs, ivs[1:]):
                if not (a.right == b.left and a.left < a.right):
                    return f"{name} level {n}: endpoints not an increasing tiling"
    return None


@_check("netintervals", "child word mass stays within the parent sandwich", fast=True)
def _net_pn_sandwich():
    for name, spec, n_max in _bundled_systems():
        net = build_net_levels(spec, n_max)
        p_min = min(spec.probs)
        for n in range(1, n_max + 1):
            for child in net.levels[n].intervals:
                mid = (child.left + child.right) / 2
                parent = net.levels[n - 1].intervals[net.interval_index(n - 1, mid)]
                if not (parent.p_value >= child.p_value >= p_min * parent.p_value):
                    return (
                        f"{name} level {n} at [{float(child.left):.4f}, "
                        f"{float(child.right):.4f}]: sandwich broken"
                    )
    return None


@_check("netintervals", "level mass brackets tighten toward one", fast=True)
def _net_level_sums():
    for name, spec, n_max in _bundled_systems():
        net = build_net_levels(spec, n_max)
        n = 3
        prev = None
        for probe in (0, 2, 4):
            total_q = Fraction(0)
            total_p = Fraction(0)
            for idx in range(len(net.levels[n].intervals)):
                q, p = net_interval_pq(net, n, idx, probe)
                total_q += q
                total_p += p
            if not total_q <= 1 <= total_p:
                return f"{name} probe {probe}: sums ({total_q}, {total_p}) miss 1"
            if prev is not None:
                q0, p0 = prev
                if not (q0 <= total_q and total_p <= p0):
                    return f"{name}: brackets widened from probe {probe - 2} to {probe}"
            prev = (total_q, total_p)
    return None


@_check("netintervals", "neighbor state counts stabilize", fast=True)
def _net_state_stabilization():
    for name, spec, n_max in _bundled_systems():
        net = build_net_levels(spec, n_max)
        if net.last_new_state_level >= n_max - 2:
            return f"{name}: new states still appearing at level {net.last_new_state_level}"
        tail = net.state_counts[net.last_new_state_level :]
        if max(tail) != tail[0] and sorted(tail, reverse=True) != list(tail):
            return f"{name}: state counts grow after stabilization: {tail}"
    return None


@_check("netintervals", "golden convolution doubling verdict tracks the scale function", fast=False)
def _net_golden_doubling():
    net = build_net_levels(golden_bernoulli(Fraction(7, 10)), 18)
    flat = phi_doubling_check(net, ScaleFunction(kind="constant", delta=0.0))
    if flat.passed:
        return "constant zero scale function wrongly passed"
    for delta in (0.1, 0.2, 0.5, 1.0):
        rep = phi_doubling_check(net, ScaleFunction(kind="constant", delta=delta))
        if not rep.passed:
            return f"delta={delta} wrongly failed (rule {rep.rule})"
    return None


# -- estimate ----------------------------------------------------------------

_EST_DEPTH = 12
_CHAIN_TOL = 0.1
_LADDER_TOL = 0.05


@_check("estimate", "directional estimates respect the local dimension chain", fast=False)
def _est_chain():
    phi = ScaleFunction(kind="constant", delta=0.5)
    for name, spec, base in _bundled_specs():
        cfg = EstimationConfig(base=base, n_max=_EST_DEPTH)
        up = estimate_upper_phi_dim(spec, phi, cfg)
        lo = estimate_lower_phi_dim(spec, phi, cfg)
        if up.diverging or math.isinf(up.value):
            continue
        if not lo.value <= up.value + 1e-12:
            return f"{name}: lower {lo.value} above upper {up.value}"
        locs = []
        for z in _support_points(spec):
            try:
                locs.append(local_dimension_estimate(spec, z, base=base, n_max=_EST_DEPTH + 4))
            except ValueError:
                continue
        if not locs:
            return f"{name}: no probed center produced a local slope"
        if not lo.value <= min(l.lower for l in locs) + _CHAIN_TOL:
            return f"{name}: lower-dim {lo.value} above local minimum"
        if not max(l.upper for l in locs) <= up.value + _CHAIN_TOL:
            return f"{name}: local maximum above upper-dim {up.value}"
    return None


@_check("estimate", "upper estimates shrink and lower estimates grow along the ladder", fast=False)
def _est_ladder_monotone():
    for name, spec, base in _bundled_specs():
        cfg = EstimationConfig(base=base, n_max=_EST_DEPTH)
        prev_up = None
        prev_lo = None
        for phi in _phi_ladder():
            up = estimate_upper_phi_dim(spec, phi, cfg)
            lo = estimate_lower_phi_dim(spec, phi, cfg)
            if math.isinf(up.value):
                prev_up, prev_lo = up, lo
                continue
            if prev_up is not None and not math.isinf(prev_up.value):
                if not up.value <= prev_up.value + _LADDER_TOL:
                    return f"{name}: upper rose {prev_up.value} -> {up.value} at {phi.kind}"
                if not lo.value >= prev_lo.value - _LADDER_TOL:
                    return f"{name}: lower fell {prev_lo.value} -> {lo.value} at {phi.kind}"
            prev_up, prev_lo = up, lo
    return None


@_check("estimate", "measure dimension dominates its support dimension", fast=False)
def _est_support_comparison():
    phi = ScaleFunction(kind="constant", delta=0.0)
    for name, spec, base in _bundled_specs()[:2]:
        cfg = EstimationConfig(base=base, n_max=_EST_DEPTH)
        up = estimate_upper_phi_dim(spec, phi, cfg)
        sup = estimate_set_phi_dim(spec, phi, cfg)
        if not up.value >= sup.value - _CHAIN_TOL:
            return f"{name}: measure {up.value} below support {sup.value}"
    return None


@_check("estimate", "inverse-log scale function matches the flat one", fast=False)
def _est_inverse_log_flat():
    flat = ScaleFunction(kind="constant", delta=0.0)
    invlog = ScaleFunction(kind="inverse_log", c=1.0)
    for name, spec, base in _bundled_specs()[:2]:
        cfg = EstimationConfig(base=base, n_max=_EST_DEPTH)
        for est in (estimate_upper_phi_dim, estimate_lower_phi_dim):
            a = est(spec, flat, cfg).value
            b = est(spec, invlog, cfg).value
            if math.isinf(a) or math.isinf(b):
                continue
            if abs(a - b) > _LADDER_TOL:
                return f"{name}: {est.__name__} flat {a} vs inverse-log {b}"
    return None


@_check("estimate", "abs-log upper estimate equals the box estimate", fast=False)
def _est_abslog_box():
    phi = ScaleFunction(kind="abs_log")
    for name, spec, base in _bundled_specs()[:2]:
        cfg = EstimationConfig(base=base, n_max=_EST_DEPTH)
        up = estimate_upper_phi_dim(spec, phi, cfg).value
        box = estimate_minkowski_frostman(spec, cfg).minkowski
        if abs(up - box) > _LADDER_TOL:
            return f"{name}: abs-log upper {up} vs box {box}"
    return None


@_check("estimate", "estimates stay inside the box-dimension sandwich", fast=False)
def _est_box_sandwich():
    for name, spec, base in _bundled_specs()[:3]:
        # Lebesgue's lower scan sheds its boundary-pair dip only with depth;
        # the exact specs are already tight at the shared default
        depth = 24 if base == 2 else _EST_DEPTH
        cfg = EstimationConfig(base=base, n_max=depth)
        box = estimate_minkowski_frostman(spec, cfg)
        for phi in (
            ScaleFunction(kind="constant", delta=0.5),
            ScaleFunction(kind="constant", delta=1.0),
            ScaleFunction(kind="abs_log"),
        ):
            L = phi.metadata().inv_limsup
            bounds = box_frostman_bounds(box.minkowski, box.frostman, L)
            up = estimate_upper_phi_dim(spec, phi, cfg).value
            lo = estimate_lower_phi_dim(spec, phi, cfg).value
            if not bounds.upper[0] - _CHAIN_TOL <= up <= bounds.upper[1] + _CHAIN_TOL:
                return f"{name} {phi.kind}: upper {up} outside {bounds.upper}"
            if not bounds.lower[0] - _CHAIN_TOL <= lo <= bounds.lower[1] + _CHAIN_TOL:
                return f"{name} {phi.kind}: lower {lo} outside {bounds.lower}"
    return None


@_check("estimate", "results do not depend on the worker count", fast=True)
def _est_thread_determinism():
    spec = CentralCantorSpec(schedule=(Fraction(1, 3),))
    phi = ScaleFunction(kind="constant", delta=0.0)
    runs = [
        estimate_upper_phi_dim(spec, phi, EstimationConfig(n_max=10, threads=t))
        for t in (1, 4)
    ]
    if runs[0].value != runs[1].value or runs[0].witness != runs[1].witness:
        return f"threads 1 vs 4: {runs[0].value} vs {runs[1].value}"
    return None


@_check("estimate", "uniform Cantor measure and its support agree", fast=False)
def _est_cantor_measure_vs_set():
    cfg = EstimationConfig(base=3, n_max=_EST_DEPTH)
    phi = ScaleFunction(kind="constant", delta=0.0)
    spec = CentralCantorSpec(schedule=(Fraction(1, 3),))
    measure = estimate_upper_phi_dim(spec, phi, cfg).value
    support = estimate_set_phi_dim(spec, phi, cfg).value
    if abs(measure - support) > _LADDER_TOL:
        return f"measure {measure} vs support {support}"
    return None


# -- closedform --------------------------------------------------------------


@_check("closedform", "discrete branches agree where they meet", fast=True)
def _cf_branch_continuity():
    for beta in (1.2, 1.5, 2.0, 3.0):
        for lam in (0.5, 1.0, 2.0):
            L = lam
            s = (beta - 1.0) / lam
            t = beta / (lam + 1.0)
            a1 = max(1.0, s)
            b1 = max(t + L * (t - s), s)
            if abs(a1 - b1) > 1e-9:
                return f"p0=0 seam at beta={beta}, lam={lam}: {a1} vs {b1}"
            a2 = s * L + max(1.0, s)
            b2 = (1.0 + L) * max(s, t)
            if abs(a2 - b2) > 1e-9:
                return f"p0>0 seam at beta={beta}, lam={lam}: {a2} vs {b2}"
    return None


@_check("closedform", "self-similar interval ignores map order", fast=True)
def _cf_ssc_permutation():
    ratios = (Fraction(1, 3), Fraction(1, 4), Fraction(1, 5))
    probs = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
    base = ssc_dimension_interval(ratios, probs)
    perm = ssc_dimension_interval(ratios[::-1], probs[::-1])
    if base.interval != perm.interval:
        return f"{base.interval} vs permuted {perm.interval}"
    return None


@_check("closedform", "box bounds collapse when the transfer constant is zero", fast=True)
def _cf_box_collapse():
    bounds = box_frostman_bounds(0.8, 0.3, 0.0)
    if bounds.upper != (0.8, 0.8) or bounds.lower != (0.3, 0.3):
        return f"upper {bounds.upper} lower {bounds.lower}"
    return None


@_check("closedform", "exponential-exponential with no extra atom ignores the scale function", fast=True)
def _cf_expexp_phi_free():
    spec = DiscreteSpec(
        position_kind="exp",
        lam=Fraction(3),
        weight_kind="exp",
        beta=Fraction(2),
        p0=Fraction(0),
    )
    values = {
        discrete_phi_dimension(spec, phi).value
        for phi in (
            ScaleFunction(kind="constant", delta=0.0),
            ScaleFunction(kind="constant", delta=1.0),
            ScaleFunction(kind="abs_log"),
            ScaleFunction(kind="psi"),
        )
    }
    if len(values) != 1:
        return f"distinct values {sorted(values)}"
    return None


# -- cli ---------------------------------------------------------------------


@_check("cli", "configs round trip through their echo", fast=True)
def _cli_round_trip():
    from .configio import load_config_obj

    obj = {
        "measure": {
            "kind": "discrete",
            "p": {"kind": "exp", "beta": 2},
            "a": {"kind": "exp", "lam": 3},
            "p0": "1/10",
        },
        "phi": {"kind": "constant", "delta": "1/2"},
        "estimator": {"n_max": 14, "lambda_min": "3"},
    }
    first = load_config_obj(obj)
    second = load_config_obj(first.raw)
    if (
        first.measure != second.measure
        or first.estimator != second.estimator
        or repr(first.phi) != repr(second.phi)
    ):
        return "semantic content changed on reload"
    if first.measure.p0 != Fraction(1, 10):
        return f"p0 parsed as {first.measure.p0}"
    return None


def run_checks(fast_only: bool = False) -> list[CheckResult]:
    results = []
    for module, invariant, fast, fn in _REGISTRY:
        if fast_only and not fast:
            continue
        start = time.perf_counter()
        try:
            witness = fn()
        except Exception as exc:  # a crash is a failed invariant, not a crash of verify
            witness = f"raised {type(exc).__name__}: {exc}"
        results.append(
            CheckResult(
                module=module,
                invariant=invariant,
                passed=witness is None,
                witness=witness or "",
                seconds=time.perf_counter() - start,
            )
        )
    return results
