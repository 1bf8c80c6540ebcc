"""Experiment config loading and report emission.

Configs are UTF-8 JSON.  Every real number may be written as an int, a
decimal string, or an exact rational "p/q"; rationals are preserved exactly,
never rounded.  Schema violations raise ConfigurationError naming the full
field path (e.g. ``measure.p.beta``) so the CLI can fail with a usable
message and exit code 1.

Reports are deterministic bytes for a fixed config and package version:
``summary.json`` (schema "phidim/1", sorted keys), ``pairs.csv`` with the
fixed header ``z,R,r,X_lo,X_hi,alpha_hat``, and ``curve.csv`` with
``depth,alpha_hat``.
"""

from __future__ import annotations

import csv
import decimal
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .dimfunc import KINDS as PHI_KINDS
from .dimfunc import ScaleFunction
from .estimate.config import ConfigurationError, EstimationConfig
from .measures import (
    CentralCantorSpec,
    ChainCascadeSpec,
    DiscreteSpec,
    LebesgueSpec,
    PointMassSpec,
    SelfSimilarSpec,
    StationaryCascadeSpec,
)
from .netintervals import central_overlap_system, dyadic_system, golden_bernoulli

SCHEMA = "phidim/1"

MEASURE_KINDS = (
    "lebesgue",
    "point_mass",
    "discrete",
    "cascade",
    "ssc",
    "central_cantor",
    "finite_type",
)


def parse_rational(value, path: str) -> Fraction:
    """Exact rational from int, "p/q" or decimal string, or float."""
    if isinstance(value, bool):
        raise ConfigurationError(f"{path}: expected a number, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"{path}: not a rational: {value!r}") from exc
    if isinstance(value, float):
        # repr(float) round-trips, so this honors the decimal the user wrote
        return Fraction(repr(value))
    raise ConfigurationError(f"{path}: expected a number or rational string")


def _parse_float(value, path: str) -> float:
    return float(parse_rational(value, path))


def _parse_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{path}: expected an integer")
    return value


def _expect_object(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{path}: expected an object")
    return obj


def _expect_list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise ConfigurationError(f"{path}: expected a list")
    return obj


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise ConfigurationError(f"{path}.{key}: required field missing")
    return obj[key]


def _reject_unknown(obj: dict, allowed, path: str) -> None:
    extras = sorted(set(obj) - set(allowed))
    if extras:
        raise ConfigurationError(f"{path}.{extras[0]}: unknown field")


def build_phi(obj, path: str = "phi") -> ScaleFunction:
    obj = _expect_object(obj, path)
    kind = _require(obj, "kind", path)
    if kind not in PHI_KINDS:
        raise ConfigurationError(
            f"{path}.kind: unknown scale function kind {kind!r}; "
            f"expected one of {', '.join(PHI_KINDS)}"
        )
    _reject_unknown(obj, ("kind", "delta", "c", "theta", "points", "domain_floor"), path)
    kwargs: dict = {"kind": kind}
    if "delta" in obj:
        kwargs["delta"] = _parse_float(obj["delta"], f"{path}.delta")
    if "c" in obj:
        kwargs["c"] = _parse_float(obj["c"], f"{path}.c")
    if "theta" in obj:
        kwargs["theta"] = _parse_float(obj["theta"], f"{path}.theta")
    if "points" in obj:
        pts = _expect_list(obj["points"], f"{path}.points")
        parsed = []
        for k, pair in enumerate(pts):
            pair = _expect_list(pair, f"{path}.points[{k}]")
            if len(pair) != 2:
                raise ConfigurationError(f"{path}.points[{k}]: expected [x, value]")
            parsed.append(
                (
                    _parse_float(pair[0], f"{path}.points[{k}][0]"),
                    _parse_float(pair[1], f"{path}.points[{k}][1]"),
                )
            )
        kwargs["points"] = tuple(parsed)
    if "domain_floor" in obj:
        kwargs["domain_floor"] = _parse_float(obj["domain_floor"], f"{path}.domain_floor")
    try:
        return ScaleFunction(**kwargs)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc


def _build_discrete(obj: dict, path: str) -> DiscreteSpec:
    _reject_unknown(obj, ("kind", "p", "a", "p0", "truncate"), path)
    p_obj = _expect_object(_require(obj, "p", path), f"{path}.p")
    a_obj = _expect_object(_require(obj, "a", path), f"{path}.a")
    _reject_unknown(p_obj, ("kind", "beta"), f"{path}.p")
    _reject_unknown(a_obj, ("kind", "lam"), f"{path}.a")
    w_kind = _require(p_obj, "kind", f"{path}.p")
    if w_kind not in ("poly", "exp"):
        raise ConfigurationError(f"{path}.p.kind: expected 'poly' or 'exp'")
    beta = parse_rational(_require(p_obj, "beta", f"{path}.p"), f"{path}.p.beta")
    a_kind = _require(a_obj, "kind", f"{path}.a")
    if a_kind not in ("poly", "exp"):
        raise ConfigurationError(f"{path}.a.kind: expected 'poly' or 'exp'")
    lam = parse_rational(_require(a_obj, "lam", f"{path}.a"), f"{path}.a.lam")
    p0 = parse_rational(obj.get("p0", 0), f"{path}.p0")
    truncate = None
    if obj.get("truncate") is not None:
        truncate = _parse_int(obj["truncate"], f"{path}.truncate")
    try:
        return DiscreteSpec(
            position_kind=a_kind,
            lam=lam,
            weight_kind=w_kind,
            beta=beta,
            p0=p0,
            truncate=truncate,
        )
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc


def _build_cascade(obj: dict, path: str):
    _reject_unknown(obj, ("kind", "base", "ratios", "schedule"), path)
    has_ratios = "ratios" in obj
    has_schedule = "schedule" in obj
    if has_ratios == has_schedule:
        raise ConfigurationError(
            f"{path}: cascade needs exactly one of 'ratios' (stationary) "
            "or 'schedule' (moving child)"
        )
    try:
        if has_ratios:
            ratios = [
                parse_rational(v, f"{path}.ratios[{k}]")
                for k, v in enumerate(_expect_list(obj["ratios"], f"{path}.ratios"))
            ]
            base = _parse_int(obj.get("base", len(ratios)), f"{path}.base")
            return StationaryCascadeSpec(base=base, ratios=tuple(ratios))
        sched = obj["schedule"]
        if isinstance(sched, dict):
            _reject_unknown(
                sched, ("first", "factor", "count", "ratios"), f"{path}.schedule"
            )
            ratios = sched.get("ratios", "1/4")
            if isinstance(ratios, list):
                ratios = [
                    parse_rational(v, f"{path}.schedule.ratios[{k}]")
                    for k, v in enumerate(ratios)
                ]
            else:
                ratios = parse_rational(ratios, f"{path}.schedule.ratios")
            pairs = ChainCascadeSpec.geometric_schedule(
                _parse_int(_require(sched, "first", f"{path}.schedule"), f"{path}.schedule.first"),
                _parse_int(_require(sched, "factor", f"{path}.schedule"), f"{path}.schedule.factor"),
                _parse_int(_require(sched, "count", f"{path}.schedule"), f"{path}.schedule.count"),
                ratios,
            )
        else:
            rows = _expect_list(sched, f"{path}.schedule")
            pairs = []
            for k, row in enumerate(rows):
                row = _expect_list(row, f"{path}.schedule[{k}]")
                if len(row) != 2:
                    raise ConfigurationError(
                        f"{path}.schedule[{k}]: expected [level, ratio]"
                    )
                pairs.append(
                    (
                        _parse_int(row[0], f"{path}.schedule[{k}][0]"),
                        parse_rational(row[1], f"{path}.schedule[{k}][1]"),
                    )
                )
            pairs = tuple(pairs)
        base = _parse_int(obj.get("base", 3), f"{path}.base")
        return ChainCascadeSpec(schedule=pairs, base=base)
    except ConfigurationError:
        raise
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc


def _build_finite_type(obj: dict, path: str) -> SelfSimilarSpec:
    _reject_unknown(obj, ("kind", "system", "p_left", "p", "probs"), path)
    system = _require(obj, "system", path)
    try:
        if system == "dyadic":
            return dyadic_system(parse_rational(obj.get("p_left", "2/3"), f"{path}.p_left"))
        if system == "golden":
            return golden_bernoulli(parse_rational(obj.get("p", "7/10"), f"{path}.p"))
        if system == "central_overlap":
            probs = obj.get("probs")
            if probs is not None:
                probs = tuple(
                    parse_rational(v, f"{path}.probs[{k}]")
                    for k, v in enumerate(_expect_list(probs, f"{path}.probs"))
                )
            return central_overlap_system(probs)
    except ConfigurationError:
        raise
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    raise ConfigurationError(
        f"{path}.system: unknown finite-type system {system!r}; "
        "expected dyadic, golden, or central_overlap"
    )


def build_measure(obj, path: str = "measure"):
    obj = _expect_object(obj, path)
    kind = _require(obj, "kind", path)
    if kind not in MEASURE_KINDS:
        raise ConfigurationError(
            f"{path}.kind: unknown measure kind {kind!r}; "
            f"expected one of {', '.join(MEASURE_KINDS)}"
        )
    try:
        if kind == "lebesgue":
            _reject_unknown(obj, ("kind",), path)
            return LebesgueSpec()
        if kind == "point_mass":
            _reject_unknown(obj, ("kind", "at"), path)
            return PointMassSpec(at=parse_rational(obj.get("at", 0), f"{path}.at"))
        if kind == "discrete":
            return _build_discrete(obj, path)
        if kind == "cascade":
            return _build_cascade(obj, path)
        if kind == "ssc":
            _reject_unknown(obj, ("kind", "ratios", "offsets", "probs", "separation"), path)
            ratios = tuple(
                parse_rational(v, f"{path}.ratios[{k}]")
                for k, v in enumerate(_expect_list(_require(obj, "ratios", path), f"{path}.ratios"))
            )
            offsets = tuple(
                parse_rational(v, f"{path}.offsets[{k}]")
                for k, v in enumerate(_expect_list(_require(obj, "offsets", path), f"{path}.offsets"))
            )
            probs = tuple(
                parse_rational(v, f"{path}.probs[{k}]")
                for k, v in enumerate(_expect_list(_require(obj, "probs", path), f"{path}.probs"))
            )
            separation = obj.get("separation", "ssc")
            return SelfSimilarSpec(
                ratios=ratios, offsets=offsets, probs=probs, separation=separation
            )
        if kind == "central_cantor":
            _reject_unknown(obj, ("kind", "schedule"), path)
            schedule = obj.get("schedule", ["1/3"])
            schedule = tuple(
                parse_rational(v, f"{path}.schedule[{k}]")
                for k, v in enumerate(_expect_list(schedule, f"{path}.schedule"))
            )
            return CentralCantorSpec(schedule=schedule)
        return _build_finite_type(obj, path)
    except ConfigurationError:
        raise
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc


_ESTIMATOR_FIELDS = (
    "base",
    "n_min",
    "n_max",
    "lambda_min",
    "scan_mode",
    "divergence_threshold",
    "net_level",
    "centers",
    "explicit_R",
    "explicit_r",
    "min_log_mass",
    "threads",
)


def build_estimator(obj, path: str = "estimator") -> EstimationConfig:
    obj = _expect_object(obj, path)
    _reject_unknown(obj, _ESTIMATOR_FIELDS, path)
    kwargs: dict = {}
    for key in ("base", "n_min", "n_max", "net_level", "threads"):
        if obj.get(key) is not None:
            kwargs[key] = _parse_int(obj[key], f"{path}.{key}")
    for key in ("lambda_min", "divergence_threshold", "min_log_mass"):
        if key in obj:
            kwargs[key] = _parse_float(obj[key], f"{path}.{key}")
    if "scan_mode" in obj:
        kwargs["scan_mode"] = obj["scan_mode"]
    for key in ("centers", "explicit_R", "explicit_r"):
        if obj.get(key) is not None:
            vals = _expect_list(obj[key], f"{path}.{key}")
            kwargs[key] = tuple(
                parse_rational(v, f"{path}.{key}[{k}]") for k, v in enumerate(vals)
            )
    try:
        return EstimationConfig(**kwargs)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class ExperimentConfig:
    measure: object
    phi: object  # ScaleFunction or tuple of them
    estimator: EstimationConfig
    mode: dict
    outputs: dict
    raw: dict  # the parsed JSON, echoed into reports for reproducibility

    @property
    def phi_list(self) -> tuple:
        if isinstance(self.phi, tuple):
            return self.phi
        return (self.phi,)


def load_config_obj(obj) -> ExperimentConfig:
    obj = _expect_object(obj, "config")
    _reject_unknown(obj, ("measure", "phi", "estimator", "mode", "outputs"), "config")
    measure = build_measure(_require(obj, "measure", "config"))
    phi_obj = obj.get("phi", {"kind": "constant", "delta": 0})
    if isinstance(phi_obj, list):
        phi: object = tuple(build_phi(p, f"phi[{k}]") for k, p in enumerate(phi_obj))
        if not phi:
            raise ConfigurationError("phi: list must not be empty")
    else:
        phi = build_phi(phi_obj)
    estimator = build_estimator(obj.get("estimator", {}))
    mode = _expect_object(obj.get("mode", {}), "mode")
    outputs = _expect_object(obj.get("outputs", {}), "outputs")
    return ExperimentConfig(
        measure=measure, phi=phi, estimator=estimator, mode=mode, outputs=outputs, raw=obj
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    return load_config_obj(obj)


# -- report emission ---------------------------------------------------------


def _json_safe(value):
    """Recursively replace non-JSON floats; keep everything else as-is."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def summary_json_bytes(payload: dict) -> bytes:
    """Stable bytes: schema + version stamped, keys sorted, no raw NaN/inf."""
    body = dict(payload)
    body["schema"] = SCHEMA
    body["version"] = __version__
    text = json.dumps(_json_safe(body), sort_keys=True, indent=2, allow_nan=False)
    return (text + "\n").encode("utf-8")


def estimate_payload(est) -> dict:
    return {
        "direction": est.direction,
        "value": est.value,
        "curve": [[depth, alpha] for depth, alpha in est.curve],
        "diverging": est.diverging,
        "witness": list(est.witness) if est.witness else None,
        "pair_count": est.pair_count,
        "dropped_pairs": est.dropped_pairs,
    }


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    f = float(value)
    if math.isnan(f):
        return ""
    return repr(f)


def write_pairs_csv(path: str, records, want_upper: bool) -> None:
    """The fixed-header pair dump: one row per certified scale pair."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["z", "R", "r", "X_lo", "X_hi", "alpha_hat"])
        for rec in records:
            log_x = rec.log_x_lo if want_upper else rec.log_x_hi
            alpha = "" if log_x is None else repr(log_x / rec.log_gap)
            writer.writerow(
                [
                    repr(float(rec.z)),
                    repr(float(rec.R)),
                    repr(float(rec.r)),
                    _fmt_cell(rec.x_lo),
                    _fmt_cell(rec.x_hi),
                    alpha,
                ]
            )


def write_curve_csv(path: str, curve) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["depth", "alpha_hat"])
        for depth, alpha in curve:
            writer.writerow([depth, repr(alpha)])


def emit_estimate_report(out_dir: str, estimates, records, config_echo: dict) -> list:
    """summary.json + pairs.csv + curve.csv for one estimate run.

    ``estimates`` is a list of DimensionEstimate (one or both directions);
    the first entry drives pairs.csv's alpha_hat column and curve.csv.
    """
    os.makedirs(out_dir, exist_ok=True)
    payload = {
        "config": config_echo,
        "estimates": [estimate_payload(e) for e in estimates],
    }
    payload.update(estimate_payload(estimates[0]))
    paths = []
    summary = os.path.join(out_dir, "summary.json")
    with open(summary, "wb") as fh:
        fh.write(summary_json_bytes(payload))
    paths.append(summary)
    pairs = os.path.join(out_dir, "pairs.csv")
    write_pairs_csv(pairs, records, want_upper=estimates[0].direction == "upper")
    paths.append(pairs)
    curve = os.path.join(out_dir, "curve.csv")
    write_curve_csv(curve, estimates[0].curve)
    paths.append(curve)
    return paths


def render_exact(value, digits: int = 12) -> str:
    """Decimal string of an exact ring element at the requested precision.

    Fractions render by exact decimal division; golden-ring elements
    (u + v*rho) use a high-precision sqrt(5).  The result is deterministic
    for a fixed value and digit count.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    with decimal.localcontext() as ctx:
        ctx.prec = digits + 12
        if isinstance(value, int):
            value = Fraction(value)
        if isinstance(value, Fraction):
            d = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
        elif hasattr(value, "u") and hasattr(value, "v"):
            rho = (decimal.Decimal(5).sqrt() - 1) / 2
            d = (
                decimal.Decimal(value.u.numerator) / decimal.Decimal(value.u.denominator)
                + decimal.Decimal(value.v.numerator)
                / decimal.Decimal(value.v.denominator)
                * rho
            )
        else:
            d = decimal.Decimal(repr(float(value)))
        quantum = decimal.Decimal(1).scaleb(-digits)
        return str(d.quantize(quantum, rounding=decimal.ROUND_HALF_EVEN))


def write_net_intervals_csv(path: str, net, levels, probe: int = 8, digits: int = 12) -> int:
    """Per-level net interval dump with exact mass brackets.

    One row per interval: level, endpoints, length normalized by r^level,
    and the (P, Q) word-mass bracket at the probe depth.  Values come out
    as decimal strings at the requested precision.  Returns the row count.
    """
    from .netintervals import net_interval_pq

    one = net.ratio / net.ratio
    inv_r = one / net.ratio
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "left", "right", "length_ratio", "P", "Q_lo"])
        for n in levels:
            if n < 1 or n + probe > net.n_max:
                raise ConfigurationError(
                    f"level {n} with probe {probe} needs levels built past "
                    f"depth {n + probe}; raise n_max"
                )
            inv_scale = inv_r**n
            for idx, iv in enumerate(net.levels[n].intervals):
                q, p = net_interval_pq(net, n, idx, probe)
                writer.writerow(
                    [
                        n,
                        render_exact(iv.left, digits),
                        render_exact(iv.right, digits),
                        render_exact(iv.length * inv_scale, digits),
                        render_exact(p, digits),
                        render_exact(q, digits),
                    ]
                )
                rows += 1
    return rows


def doubling_payload(report) -> dict:
    return {
        "passed": report.passed,
        "c0_estimate": report.c0_estimate,
        "rule": report.rule,
        "max_normalized": report.max_normalized,
        "levels": [
            {
                "n": s.n,
                "probe": s.probe,
                "max_log_ratio": s.max_log_ratio,
                "phi_n": s.phi_n,
                "normalized": s.normalized,
            }
            for s in report.levels
        ],
    }


def emit_spectrum_report(out_dir: str, report, config_echo: dict) -> list:
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for row in report.rows:
        rows.append(
            {
                "theta": row.theta,
                "upper": estimate_payload(row.upper),
                "lower": estimate_payload(row.lower),
            }
        )
    payload = {
        "config": config_echo,
        "rows": rows,
        "trend_increasing": report.trend_increasing,
        "qa_proxy": report.qa_proxy,
    }
    summary = os.path.join(out_dir, "summary.json")
    with open(summary, "wb") as fh:
        fh.write(summary_json_bytes(payload))
    spectrum = os.path.join(out_dir, "spectrum.csv")
    with open(spectrum, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", "upper", "lower"])
        for row in report.rows:
            writer.writerow(
                [
                    "" if row.theta is None else repr(row.theta),
                    repr(row.upper.value),
                    repr(row.lower.value),
                ]
            )
    return [summary, spectrum]
