"""Command line front end.

One self-describing JSON config per experiment; subcommands bind the
library modules and write deterministic artifacts.  Exit codes: 0 success,
1 configuration or schema error, 2 numerical precision failure, 3 invariant
violation found by ``verify``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .closedform import (
    FormulaDomainError,
    box_frostman_bounds,
    comparison_transfer_bounds,
    discrete_phi_dimension,
    reference_value,
    ssc_dimension_interval,
)
from .configio import (
    doubling_payload,
    emit_estimate_report,
    emit_spectrum_report,
    load_config,
    parse_rational,
    summary_json_bytes,
    write_net_intervals_csv,
)
from .dimfunc import ScaleFunction
from .enclosure import PrecisionError
from .estimate import (
    ConfigurationError,
    assemble_estimate,
    estimate_spectrum,
    scan_admissible_pairs,
)
from .invariants import run_checks
from .measures import SelfSimilarSpec
from .netintervals import GoldenNum, build_net_levels, finite_type_gap_check, phi_doubling_check

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PRECISION = 2
EXIT_VIOLATION = 3


def _resolve_threads(flag_value, cfg_threads: int) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get("PHIDIM_THREADS")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigurationError(f"PHIDIM_THREADS is not an integer: {env!r}") from exc
    return cfg_threads


def _single_phi(cfg) -> ScaleFunction:
    if isinstance(cfg.phi, tuple):
        raise ConfigurationError("phi: this subcommand takes a single scale function")
    return cfg.phi


def _estimator_with(cfg, threads: int | None, fast: bool):
    est = cfg.estimator
    changes = {}
    resolved = _resolve_threads(threads, est.threads)
    if resolved != est.threads:
        changes["threads"] = resolved
    if fast and est.scan_mode != "boundary":
        changes["scan_mode"] = "boundary"
    if changes:
        from dataclasses import replace

        est = replace(est, **changes)
    return est


def _cmd_estimate(args) -> int:
    cfg = load_config(args.config)
    phi = _single_phi(cfg)
    est_cfg = _estimator_with(cfg, args.threads, args.fast)
    direction = cfg.mode.get("direction", "both")
    if direction not in ("upper", "lower", "both"):
        raise ConfigurationError("mode.direction: expected upper, lower, or both")
    records, stats = scan_admissible_pairs(cfg.measure, phi, est_cfg)
    wanted = ("upper", "lower") if direction == "both" else (direction,)
    estimates = [assemble_estimate(d, records, stats, est_cfg) for d in wanted]
    out_dir = args.out or cfg.outputs.get("dir", "phidim-out")
    paths = emit_estimate_report(out_dir, estimates, records, cfg.raw)
    for est in estimates:
        tail = " (diverging)" if est.diverging else ""
        print(f"{est.direction}: {est.value:.6g}{tail}  [{est.pair_count} pairs]")
    print("wrote " + ", ".join(paths))
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    phi = cfg.mode.get("thetas")
    if not isinstance(phi, list) or not phi:
        raise ConfigurationError("mode.thetas: spectrum needs a nonempty list")
    thetas = [float(parse_rational(t, f"mode.thetas[{k}]")) for k, t in enumerate(phi)]
    est_cfg = _estimator_with(cfg, args.threads, args.fast)
    report = estimate_spectrum(cfg.measure, thetas, est_cfg)
    out_dir = args.out or cfg.outputs.get("dir", "phidim-out")
    paths = emit_spectrum_report(out_dir, report, cfg.raw)
    for row in report.rows:
        label = "assouad" if row.theta is None else f"theta={row.theta:g}"
        print(f"{label}: upper {row.upper.value:.6g}, lower {row.lower.value:.6g}")
    print(f"trend increasing: {report.trend_increasing}")
    print("wrote " + ", ".join(paths))
    return EXIT_OK


def _closed_form_from_config(cfg) -> dict:
    measure = cfg.measure
    if isinstance(measure, SelfSimilarSpec):
        return ssc_dimension_interval(measure.ratios, measure.probs).as_dict()
    if hasattr(measure, "position_kind"):
        return discrete_phi_dimension(measure, _single_phi(cfg)).as_dict()
    raise ConfigurationError(
        "measure.kind: no closed form is bundled for this measure; "
        "pass --case for the reference formulas"
    )


def _closed_form_case(case: str, params: dict) -> dict:
    if case == "ssc_interval":
        ratios = [parse_rational(v, f"params.ratios[{k}]") for k, v in enumerate(params["ratios"])]
        probs = [parse_rational(v, f"params.probs[{k}]") for k, v in enumerate(params["probs"])]
        return ssc_dimension_interval(ratios, probs).as_dict()
    if case == "box_bounds":
        bounds = box_frostman_bounds(
            float(params["dim_m"]), float(params["dim_f"]), float(params["transfer"])
        )
        return bounds.as_dict()
    if case == "comparison":
        upper, lower = comparison_transfer_bounds(
            float(params["lam"]),
            float(params["upper_phi"]),
            float(params["lower_phi"]),
            float(params["assouad_dim"]),
        )
        return {"branch": "comparison transfer", "upper": upper, "lower": lower}
    return reference_value(case, **params).as_dict()


def _cmd_closed_form(args) -> int:
    if args.case:
        params = {}
        if args.params:
            try:
                params = json.loads(args.params)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"--params is not valid JSON: {exc}") from exc
            if not isinstance(params, dict):
                raise ConfigurationError("--params must be a JSON object")
        payload = _closed_form_case(args.case, params)
    elif args.config:
        payload = _closed_form_from_config(load_config(args.config))
    else:
        raise ConfigurationError("closed-form needs --case or a config with -c")
    payload["version"] = __version__
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _net_from_config(cfg, args):
    if not isinstance(cfg.measure, SelfSimilarSpec):
        raise ConfigurationError(
            "measure.kind: net intervals need an exact self-similar system "
            "(kind 'ssc' or 'finite_type')"
        )
    n_max = int(cfg.mode.get("n_max", 12))
    net = build_net_levels(cfg.measure, n_max)
    ring = args.ring or cfg.mode.get("ring", "rational")
    if ring not in ("rational", "golden"):
        raise ConfigurationError("--ring must be rational or golden")
    uses_golden = isinstance(net.ratio, GoldenNum) and net.ratio.v != 0
    if ring == "golden" and not uses_golden:
        raise ConfigurationError("--ring golden needs a golden-ratio system")
    if ring == "rational" and uses_golden:
        raise ConfigurationError(
            "this system needs the golden ring; rerun with --ring golden"
        )
    return net


def _cmd_net_intervals(args) -> int:
    cfg = load_config(args.config)
    net = _net_from_config(cfg, args)
    probe = int(cfg.mode.get("probe", 8))
    digits = args.digits or int(cfg.mode.get("digits", 12))
    levels = cfg.mode.get("levels")
    if args.levels:
        levels = [int(x) for x in args.levels.split(",")]
    if levels is None:
        levels = [max(1, net.n_max - probe)]
    out_dir = args.out or cfg.outputs.get("dir", "phidim-out")
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "net_intervals.csv")
    rows = write_net_intervals_csv(csv_path, net, levels, probe=probe, digits=digits)
    census = finite_type_gap_check(net)
    summary = {
        "config": cfg.raw,
        "rows": rows,
        "levels": list(levels),
        "probe": probe,
        "gap_constant": census.gap_constant,
        "gap_stabilized_at": census.gap_stabilized_at,
        "offset_value_count": census.offset_value_count,
        "max_multiplicity": census.max_multiplicity,
        "state_counts": list(census.state_counts),
        "states_stabilized_at": census.states_stabilized_at,
    }
    summary_path = os.path.join(out_dir, "summary.json")
    with open(summary_path, "wb") as fh:
        fh.write(summary_json_bytes(summary))
    print(f"wrote {csv_path} ({rows} rows), {summary_path}")
    return EXIT_OK


def _cmd_doubling_check(args) -> int:
    cfg = load_config(args.config)
    net = _net_from_config(cfg, args)
    probe = int(cfg.mode.get("probe", 8))
    payloads = []
    for phi in cfg.phi_list:
        report = phi_doubling_check(net, phi, probe=probe)
        body = doubling_payload(report)
        body["phi_kind"] = phi.kind
        payloads.append(body)
        print(
            f"phi {phi.kind}: {'pass' if report.passed else 'FAIL'} "
            f"(C0 ~ {report.c0_estimate:.4g}, rule: {report.rule})"
        )
    out_dir = args.out or cfg.outputs.get("dir", "phidim-out")
    os.makedirs(out_dir, exist_ok=True)
    summary_path = os.path.join(out_dir, "summary.json")
    with open(summary_path, "wb") as fh:
        fh.write(summary_json_bytes({"config": cfg.raw, "checks": payloads}))
    print(f"wrote {summary_path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_checks(fast_only=args.fast)
    width = max(len(r.invariant) for r in results)
    failures = 0
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        line = f"{mark}  {r.module:<12} {r.invariant:<{width}}  {r.seconds:6.2f}s"
        if not r.passed:
            failures += 1
            line += f"\n      witness: {r.witness}"
        print(line)
    print(f"{len(results) - failures}/{len(results)} invariants hold")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        payload = {
            "fast": args.fast,
            "failures": failures,
            "results": [
                {
                    "module": r.module,
                    "invariant": r.invariant,
                    "passed": r.passed,
                    "witness": r.witness,
                    "seconds": r.seconds,
                }
                for r in results
            ],
        }
        path = os.path.join(args.out, "summary.json")
        with open(path, "wb") as fh:
            fh.write(summary_json_bytes(payload))
        print(f"wrote {path}")
    return EXIT_VIOLATION if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phidim",
        description="Scale-dependent dimension estimation for measures on the line",
    )
    parser.add_argument("--version", action="version", version=f"phidim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("-c", "--config", required=config_required, help="JSON config path")
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int, help="worker count (PHIDIM_THREADS fallback)")
        p.add_argument("--fast", action="store_true", help="coarser but quicker scan")

    p_est = sub.add_parser("estimate", help="directional dimension estimates")
    common(p_est)
    p_est.set_defaults(fn=_cmd_estimate)

    p_spec = sub.add_parser("spectrum", help="theta sweep of constant scale functions")
    common(p_spec)
    p_spec.set_defaults(fn=_cmd_spectrum)

    p_cf = sub.add_parser("closed-form", help="exact dimension formulas")
    p_cf.add_argument("-c", "--config", help="JSON config path")
    p_cf.add_argument("--case", help="named formula case")
    p_cf.add_argument("--params", help="JSON object of case parameters")
    p_cf.set_defaults(fn=_cmd_closed_form)

    p_net = sub.add_parser("net-intervals", help="exact net interval census")
    common(p_net)
    p_net.add_argument("--ring", choices=("rational", "golden"), help="exact arithmetic ring")
    p_net.add_argument("--digits", type=int, help="decimal digits in the CSV")
    p_net.add_argument("--levels", help="comma-separated levels to dump")
    p_net.set_defaults(fn=_cmd_net_intervals)

    p_dbl = sub.add_parser("doubling-check", help="scale-function doubling verdicts")
    common(p_dbl)
    p_dbl.add_argument("--ring", choices=("rational", "golden"), help="exact arithmetic ring")
    p_dbl.set_defaults(fn=_cmd_doubling_check)

    p_ver = sub.add_parser("verify", help="run the module invariant suite")
    p_ver.add_argument("--fast", action="store_true", help="quick subset of the checks")
    p_ver.add_argument("--out", help="also write summary.json here")
    p_ver.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FormulaDomainError as exc:
        print(f"formula domain error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
