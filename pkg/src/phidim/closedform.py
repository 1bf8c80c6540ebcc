"""Exact dimension values for the measure families that admit formulas.

Each evaluator substitutes into a known closed form and records which branch
of the formula applied, so estimator output can be checked against ground
truth instead of against itself.  Infinity is a legitimate value here, never
an error; genuine domain violations raise FormulaDomainError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .dimfunc import ScaleFunction, geometric_grid
from .enclosure import exact_log
from .measures.base import as_fraction

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class FormulaDomainError(ValueError):
    """Inputs outside the range where the closed form is stated."""


@dataclass(frozen=True)
class ClosedFormResult:
    """A single closed-form evaluation: value or ordered interval.

    ``label`` is "analytic" when the formula was evaluated exactly and
    "grid-estimate" when a limsup had to be sampled on a finite grid
    (tabulated scale functions only).
    """

    branch: str
    inputs: dict
    value: float | None = None
    interval: tuple[float, float] | None = None
    label: str = "analytic"

    def __post_init__(self) -> None:
        if (self.value is None) == (self.interval is None):
            raise ValueError("exactly one of value/interval must be set")
        if self.interval is not None and self.interval[0] > self.interval[1]:
            raise ValueError("interval endpoints out of order")

    def as_dict(self) -> dict:
        out: dict = {"branch": self.branch, "label": self.label}
        if self.value is not None:
            out["value"] = _json_number(self.value)
        if self.interval is not None:
            out["interval"] = [_json_number(v) for v in self.interval]
        out["inputs"] = self.inputs
        return out


def _json_number(v: float):
    # JSON has no Infinity literal; keep outputs strictly parseable
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def ssc_dimension_interval(ratios, probs) -> ClosedFormResult:
    """[min, max] of log p_j / log r_j over the maps of a separated IFS.

    For strongly separated self-similar measures these extremes are the lower
    and upper dimensions for every admissible scale function, so the interval
    doubles as a ground-truth band for the estimators.
    """
    rs = [as_fraction(r) for r in ratios]
    ps = [as_fraction(p) for p in probs]
    if len(rs) != len(ps) or not rs:
        raise FormulaDomainError("need matching nonempty ratio/probability lists")
    for r in rs:
        if not 0 < r < 1:
            raise FormulaDomainError("contraction ratios must lie in (0, 1)")
    for p in ps:
        if p <= 0:
            raise FormulaDomainError("probabilities must be positive")
    if sum(ps) != 1:
        raise FormulaDomainError("probabilities must sum to 1")
    quotients = [exact_log(p) / exact_log(r) for p, r in zip(ps, rs)]
    return ClosedFormResult(
        branch="separated self-similar",
        inputs={
            "ratios": [float(r) for r in rs],
            "probs": [float(p) for p in ps],
        },
        interval=(min(quotients), max(quotients)),
    )


def _inv_limsup(phi) -> tuple[float, str]:
    """L = limsup 1/phi near 0, with an analytic/grid label."""
    if isinstance(phi, ScaleFunction):
        info = phi.metadata()
        return info.inv_limsup, info.provenance
    L = float(phi)
    if L < 0:
        raise FormulaDomainError("limsup of 1/phi cannot be negative")
    return L, "analytic"


def _psi_ratio_limsup(phi: ScaleFunction) -> tuple[float, str]:
    """limsup of (log|log x|/|log x|) / phi(x) as x -> 0, per kind."""
    if phi.kind == "constant":
        return (math.inf if phi.delta == 0 else 0.0), "analytic"
    if phi.kind in ("theta", "abs_log"):
        return 0.0, "analytic"
    if phi.kind == "inverse_log":
        return math.inf, "analytic"
    if phi.kind == "psi":
        return 1.0, "analytic"
    # tabulated: sample the ratio on a dyadic grid and keep the finest tail
    psi = ScaleFunction(kind="psi")
    ratios = []
    for x in geometric_grid(2.0, 60, n_min=8):
        denom = phi(x)
        ratios.append(math.inf if denom == 0 else psi(x) / denom)
    tail = ratios[len(ratios) // 2 :]
    return max(tail), "grid-estimate"


def discrete_phi_dimension(spec, phi) -> ClosedFormResult:
    """Upper dimension of p0*delta_0 + sum p_n*delta_(a_n) by rate regime.

    ``phi`` may be a ScaleFunction or the number L = limsup 1/phi directly;
    the polynomial-exponential regime needs the function itself because its
    value depends on more than L.
    """
    if spec.truncate is not None:
        raise FormulaDomainError(
            "closed forms describe the full atom sequence; truncated specs "
            "are finite measures with dimension 0"
        )
    beta = float(spec.beta)
    lam = float(spec.lam)
    p0 = spec.p0
    inputs: dict = {
        "positions": spec.position_kind,
        "weights": spec.weight_kind,
        "beta": beta,
        "lam": lam,
        "p0": float(p0),
    }

    if spec.position_kind == "poly" and spec.weight_kind == "poly":
        if not (beta > 1 and lam > 0):
            raise FormulaDomainError("double-polynomial case needs beta > 1, lam > 0")
        L, label = _inv_limsup(phi)
        st = spec.poly_poly_exponents
        s, t = float(st[0]), float(st[1])
        inputs.update({"L": _json_number(L), "s": s, "t": t})
        if L >= lam:
            branch = "L >= lambda"
            value = max(1.0, s) if p0 == 0 else s * L + max(1.0, s)
        else:
            branch = "L <= lambda"
            value = max(t + L * (t - s), s) if p0 == 0 else (1.0 + L) * max(s, t)
        return ClosedFormResult(branch=branch, inputs=inputs, value=value, label=label)

    if spec.position_kind == "exp" and spec.weight_kind == "exp":
        if not (beta > 1 and lam > 1):
            raise FormulaDomainError("double-exponential case needs beta, lam > 1")
        base_value = math.log(beta) / math.log(lam)
        if p0 == 0:
            return ClosedFormResult(
                branch="p0 = 0",
                inputs=inputs,
                value=base_value,
            )
        L, label = _inv_limsup(phi)
        inputs["L"] = _json_number(L)
        return ClosedFormResult(
            branch="p0 > 0",
            inputs=inputs,
            value=(1.0 + L) * base_value,
            label=label,
        )

    if spec.position_kind == "poly" and spec.weight_kind == "exp":
        # geometric weights on polynomially spaced atoms: infinite for every phi
        return ClosedFormResult(
            branch="exponential weights, polynomial positions",
            inputs=inputs,
            value=math.inf,
        )

    # exponential positions, polynomial weights
    if not (beta > 1 and lam > 1):
        raise FormulaDomainError(
            "polynomial-exponential case needs beta, lam > 1"
        )
    if not isinstance(phi, ScaleFunction):
        raise FormulaDomainError(
            "polynomial-exponential case needs the scale function itself, "
            "not just the limsup of its reciprocal"
        )
    ratio, label = _psi_ratio_limsup(phi)
    inputs["psi_ratio_limsup"] = _json_number(ratio)
    if p0 == 0:
        return ClosedFormResult(
            branch="p0 = 0", inputs=inputs, value=ratio, label=label
        )
    return ClosedFormResult(
        branch="p0 > 0", inputs=inputs, value=beta * ratio, label=label
    )


@dataclass(frozen=True)
class BoxFrostmanBounds:
    """Bands for the flat-function dimensions implied by box-type dimensions."""

    upper: tuple[float, float]
    lower: tuple[float, float]
    inputs: dict = field(compare=False)

    def as_dict(self) -> dict:
        return {
            "upper": [_json_number(v) for v in self.upper],
            "lower": [_json_number(v) for v in self.lower],
            "inputs": self.inputs,
        }


def box_frostman_bounds(dim_m: float, dim_f: float, transfer: float) -> BoxFrostmanBounds:
    """Sandwich the upper/lower dimensions between box-type dimensions.

    ``transfer`` is L = limsup 1/phi.  The lower band's left end may be
    negative; it is returned as the formula states, not clamped at 0.
    """
    if dim_f > dim_m:
        raise FormulaDomainError("lower box-type dimension exceeds upper")
    if dim_f < 0 or transfer < 0:
        raise FormulaDomainError("dimensions and transfer constant must be >= 0")
    gap = dim_m - dim_f
    spread = 0.0 if gap == 0 else transfer * gap  # avoid inf * 0
    return BoxFrostmanBounds(
        upper=(dim_m, dim_m + spread),
        lower=(dim_f - spread, dim_f),
        inputs={
            "dim_minkowski": _json_number(dim_m),
            "dim_frostman": _json_number(dim_f),
            "transfer": _json_number(transfer),
        },
    )


def comparison_transfer_bounds(
    lam: float, upper_phi: float, lower_phi: float, assouad_dim: float
) -> tuple[float, float]:
    """Bounds transferred to a smaller scale function dominating lam * phi.

    Returns (lower bound for the new upper dimension, upper bound for the
    new lower dimension).  Infinite inputs propagate; lam = 1 is the
    degenerate comparison where both bounds collapse to the inputs.
    """
    if not 0 < lam <= 1:
        raise FormulaDomainError("comparison factor must lie in (0, 1]")
    slack = 0.0 if lam == 1 else (1.0 - lam) * assouad_dim
    return (lam * upper_phi, lower_phi + slack)


_LOG2 = math.log(2.0)
_LOG3 = math.log(3.0)


def biased_dyadic_theta_dimension(theta: float) -> ClosedFormResult:
    """Spectrum value 1/theta + log3/log2 for the 2/3-1/3 dyadic cascade."""
    if not 0 < theta <= 1:
        raise FormulaDomainError("theta must lie in (0, 1]")
    return ClosedFormResult(
        branch="biased dyadic cascade spectrum",
        inputs={"theta": theta},
        value=1.0 / theta + _LOG3 / _LOG2,
    )


def golden_bernoulli_lower_bound(p: float, delta: float) -> ClosedFormResult:
    """Growth-rate lower bound log(p/(1-p)) / (2*delta*|log rho|).

    rho is the golden contraction (sqrt(5)-1)/2; valid for the biased
    convolution with 1/2 < p < 1 and a constant scale function delta > 0.
    """
    if not 0.5 < p < 1:
        raise FormulaDomainError("bias must lie in (1/2, 1)")
    if delta <= 0:
        raise FormulaDomainError("delta must be positive")
    value = math.log(p / (1.0 - p)) / (2.0 * delta * abs(math.log(_GOLDEN)))
    return ClosedFormResult(
        branch="biased convolution transition growth",
        inputs={"p": p, "delta": delta, "rho": _GOLDEN},
        value=value,
    )


def cascade_chain_dimension(liminf_p) -> ClosedFormResult:
    """log(1/liminf p) / log 3 for the moving-child cascade at phi = 1."""
    p = as_fraction(liminf_p)
    if not 0 < p <= Fraction(1, 2):
        raise FormulaDomainError("liminf branch probability must lie in (0, 1/2]")
    return ClosedFormResult(
        branch="moving-child cascade, constant scale 1",
        inputs={"liminf_p": float(p)},
        value=-exact_log(p) / _LOG3,
    )


REFERENCE_CASES = {
    "biased_dyadic_theta": biased_dyadic_theta_dimension,
    "golden_bernoulli_lower": golden_bernoulli_lower_bound,
    "cascade_chain": cascade_chain_dimension,
}


def reference_value(name: str, **params) -> ClosedFormResult:
    """Dispatch one of the named worked examples by keyword parameters."""
    fn = REFERENCE_CASES.get(name)
    if fn is None:
        known = ", ".join(sorted(REFERENCE_CASES))
        raise FormulaDomainError(f"unknown reference case {name!r}; known: {known}")
    return fn(**params)
