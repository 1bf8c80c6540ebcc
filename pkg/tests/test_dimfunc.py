"""Scale function kinds, domain policing, and the depth weight identity."""

import math

import pytest

from phidim.dimfunc import (
    DEFAULT_DOMAIN_FLOOR,
    KINDS,
    DomainError,
    ScaleFunction,
    geometric_grid,
    is_doubling_function,
    validate_scale_function,
)


def test_kind_catalog_is_stable():
    assert KINDS == ("constant", "inverse_log", "psi", "abs_log", "theta", "table")


def test_unknown_kind_rejected():
    with pytest.raises(ValueError, match="unknown scale function kind"):
        ScaleFunction(kind="quadratic")


def test_constant_kind_returns_delta_everywhere():
    f = ScaleFunction(kind="constant", delta=0.75)
    assert f(0.5) == 0.75
    assert f(1e-9) == 0.75


def test_inverse_log_kind_value():
    f = ScaleFunction(kind="inverse_log", c=2.0)
    x = math.exp(-8.0)
    assert f(x) == pytest.approx(2.0 / 8.0, rel=1e-15)


def test_abs_log_kind_value():
    f = ScaleFunction(kind="abs_log")
    assert f(math.exp(-5.0)) == pytest.approx(5.0, rel=1e-15)


def test_theta_kind_is_reciprocal_minus_one():
    f = ScaleFunction(kind="theta", theta=0.25)
    assert f(0.5) == pytest.approx(3.0)
    with pytest.raises(ValueError, match="theta"):
        ScaleFunction(kind="theta", theta=1.0)


def test_psi_kind_clamps_near_one():
    f = ScaleFunction(kind="psi")
    # raw log|log x|/|log x| is negative for x in (1/e, 1)
    assert f(0.9) == 0.0
    x = math.exp(-math.e**2)
    want = math.log(math.e**2) / math.e**2
    assert f(x) == pytest.approx(want, rel=1e-15)


def test_table_kind_interpolates_in_log_x():
    f = ScaleFunction(kind="table", points=((0.25, 1.0), (0.0625, 3.0)))
    # halfway in log space between 0.25 and 0.0625 is 0.125
    assert f(0.125) == pytest.approx(2.0, rel=1e-12)
    assert f(0.5) == 1.0  # flat beyond the coarse end
    assert f(0.001) == 3.0  # flat beyond the fine end


def test_table_kind_validation():
    with pytest.raises(ValueError, match="at least one point"):
        ScaleFunction(kind="table", points=())
    with pytest.raises(ValueError, match="distinct"):
        ScaleFunction(kind="table", points=((0.5, 1.0), (0.5, 2.0)))
    with pytest.raises(ValueError, match="in \\(0, 1\\)"):
        ScaleFunction(kind="table", points=((1.5, 1.0),))


def test_domain_floor_is_exclusive():
    f = ScaleFunction(kind="constant", delta=1.0)
    with pytest.raises(DomainError):
        f(DEFAULT_DOMAIN_FLOOR)
    with pytest.raises(DomainError):
        f(1.0)
    assert f(DEFAULT_DOMAIN_FLOOR * 1.0000001) == 1.0


def test_domain_floor_configurable():
    f = ScaleFunction(kind="constant", delta=1.0, domain_floor=2.0**-200)
    assert f(2.0**-150) == 1.0
    with pytest.raises(ValueError, match="domain_floor"):
        ScaleFunction(kind="constant", domain_floor=0.0)


def test_depth_weight_matches_direct_evaluation():
    f = ScaleFunction(kind="inverse_log", c=1.0)
    r = 1.0 / 3.0
    for n in (1, 5, 17):
        # the identity must hold bit for bit: same power spelling on both sides
        assert f.depth_weight(n, r) == n * f(r**n)
    with pytest.raises(ValueError):
        f.depth_weight(0, r)
    with pytest.raises(ValueError):
        f.depth_weight(3, 1.0)


def test_geometric_grid_contents():
    grid = geometric_grid(2.0, 4)
    assert grid == [0.5, 0.25, 0.125, 0.0625]
    with pytest.raises(ValueError):
        geometric_grid(1.0, 4)


@pytest.mark.parametrize(
    "f",
    [
        ScaleFunction(kind="constant", delta=0.0),
        ScaleFunction(kind="constant", delta=2.0),
        ScaleFunction(kind="inverse_log", c=1.0),
        ScaleFunction(kind="psi"),
        ScaleFunction(kind="abs_log"),
        ScaleFunction(kind="theta", theta=0.5),
        ScaleFunction(kind="table", points=((0.5, 0.2), (0.01, 1.0))),
    ],
    ids=lambda f: f.kind,
)
def test_scaled_power_strictly_decreases(f):
    report = validate_scale_function(f, geometric_grid(2.0, 50))
    assert report.ok, report.first_violation


def test_constant_metadata_inverse_limsup():
    assert ScaleFunction(kind="constant", delta=0.5).metadata().inv_limsup == 2.0
    assert ScaleFunction(kind="constant", delta=0.0).metadata().inv_limsup == math.inf
    assert ScaleFunction(kind="abs_log").metadata().inv_limsup == 0.0
    assert ScaleFunction(kind="inverse_log").metadata().inv_limsup == math.inf


def test_doubling_estimate_on_grid():
    ok, const = is_doubling_function(
        ScaleFunction(kind="constant", delta=1.0), geometric_grid(2.0, 40)
    )
    assert ok and const == pytest.approx(1.0)
