"""Interval-mass kernel tests: enclosure algebra, digit expansion, and
bit-identity between the compiled and pure backends."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from phidim.enclosure import Enclosure, LogSum, exact_log
from phidim.kernels import (
    _ckernels,
    fraction_digits,
    interval_mass_enclosure,
    kernel_backend,
    suggested_cap,
)

NEG_INF = float("-inf")
LEBESGUE_2 = (Fraction(1, 2),Fraction(1, 2))
CANTOR_3 = (Fraction(1, 2), Fraction(0), Fraction(1, 2))


class TestExactLog:
    def test_matches_math_log_on_floats(self):
        assert exact_log(0.25) == math.log(0.25)

    def test_survives_fractions_beyond_float_range(self):
        v = Fraction(3**5000, 2)
        lg = exact_log(v)
        assert math.isfinite(lg)
        assert lg == pytest.approx(5000 * math.log(3) - math.log(2))

    def test_zero_maps_to_neg_inf(self):
        assert exact_log(0) == NEG_INF
        assert exact_log(Fraction(0)) == NEG_INF

    def test_negative_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            exact_log(-1.0)
        with pytest.raises(ValueError, match="negative"):
            exact_log(Fraction(-1, 3))


class TestLogSum:
    def test_empty_sum_is_neg_inf(self):
        assert LogSum().value() == NEG_INF

    def test_neg_inf_terms_are_ignored(self):
        acc = LogSum()
        acc.add(NEG_INF)
        acc.add(math.log(0.5))
        acc.add(NEG_INF)
        assert acc.value() == pytest.approx(math.log(0.5))

    def test_matches_direct_log_of_sum(self):
        terms = [0.3, 0.001, 0.5, 0.0007, 0.1]
        acc = LogSum()
        for t in terms:
            acc.add(math.log(t))
        assert acc.value() == pytest.approx(math.log(sum(terms)), abs=1e-14)

    def test_stable_far_below_float_underflow(self):
        acc = LogSum()
        acc.add(-1000.0)
        acc.add(-1000.0)
        assert acc.value() == pytest.approx(-1000.0 + math.log(2.0))


class TestEnclosure:
    def test_from_value_is_degenerate(self):
        e = Enclosure.from_value(Fraction(1, 4))
        assert e.lo == e.hi == 0.25
        assert e.log_lo == e.log_hi == exact_log(Fraction(1, 4))
        assert e.width == 0.0

    def test_zero_is_empty(self):
        z = Enclosure.zero()
        assert z.is_empty()
        assert z.log_hi == NEG_INF

    def test_underflowed_linear_fields_do_not_mean_empty(self):
        # masses below the float floor keep finite log bounds; the log
        # field decides emptiness
        e = Enclosure(0.0, 0.0, -2000.0, -1800.0)
        assert not e.is_empty()
        assert e.log_midpoint == pytest.approx(-1900.0)

    def test_log_midpoint_falls_back_when_one_sided(self):
        e = Enclosure(0.0, 0.5, NEG_INF, math.log(0.5))
        assert e.log_midpoint == math.log(0.5)

    def test_midpoint_and_relative_width(self):
        e = Enclosure.from_bounds(Fraction(1, 4), Fraction(1, 2))
        assert e.midpoint == pytest.approx(0.375)
        assert e.relative_width() == pytest.approx(0.5)
        assert e.contains(0.3)
        assert not e.contains(0.7)

    def test_addition_adds_bounds_in_both_domains(self):
        s = Enclosure.from_value(Fraction(1, 4)) + Enclosure.from_value(
            Fraction(1, 2)
        )
        assert s.lo == s.hi == 0.75
        assert s.log_lo == pytest.approx(math.log(0.75), abs=1e-14)

    def test_addition_survives_underflowed_terms(self):
        a = Enclosure(0.0, 0.0, -1000.0, -1000.0)
        s = a + a
        assert s.lo == s.hi == 0.0
        assert s.log_hi == pytest.approx(-1000.0 + math.log(2.0))

    def test_misordered_bounds_rejected(self):
        with pytest.raises(ValueError, match="invalid enclosure"):
            Enclosure(1.0, 0.5, -1.0, 0.0)
        with pytest.raises(ValueError, match="log bounds out of order"):
            Enclosure(0.5, 1.0, 0.0, -1.0)

    def test_negative_lower_bound_rejected(self):
        with pytest.raises(ValueError, match="invalid enclosure"):
            Enclosure(-0.1, 0.5, NEG_INF, 0.0)


class TestFractionDigits:
    def test_terminating_expansion_flags_exact(self):
        digits, exact = fraction_digits(Fraction(1, 3), 3, 6)
        assert digits == [1, 0, 0, 0, 0, 0]
        assert exact

    def test_repeating_expansion_flags_inexact(self):
        digits, exact = fraction_digits(Fraction(1, 3), 2, 8)
        assert digits == [0, 1, 0, 1, 0, 1, 0, 1]
        assert not exact

    def test_base_ten_sanity(self):
        digits, exact = fraction_digits(Fraction(314159, 10**6), 10, 6)
        assert digits == [3, 1, 4, 1, 5, 9]
        assert exact


class TestIntervalMassValidation:
    def test_base_below_two_rejected(self):
        with pytest.raises(ValueError, match="base must be at least 2"):
            interval_mass_enclosure(1, (Fraction(1),), Fraction(0), Fraction(1), 4)

    def test_ratio_count_must_match_base(self):
        with pytest.raises(ValueError, match="one ratio per digit"):
            interval_mass_enclosure(
                3, LEBESGUE_2, Fraction(0), Fraction(1), 4
            )

    def test_cap_must_be_positive(self):
        with pytest.raises(ValueError, match="cap must be positive"):
            interval_mass_enclosure(
                2, LEBESGUE_2, Fraction(0), Fraction(1), 0
            )

    def test_chain_windows_need_base_three(self):
        with pytest.raises(ValueError, match="chain windows require base 3"):
            interval_mass_enclosure(
                2,
                LEBESGUE_2,
                Fraction(0),
                Fraction(1),
                4,
                windows=((2, Fraction(1, 2)),),
            )


class TestIntervalMassExactCases:
    def test_degenerate_and_outside_queries_are_zero(self):
        for a, c in [
            (Fraction(1, 2), Fraction(1, 2)),
            (Fraction(3, 4), Fraction(1, 4)),
            (Fraction(-2), Fraction(0)),
            (Fraction(1), Fraction(2)),
        ]:
            assert interval_mass_enclosure(2, LEBESGUE_2, a, c, 8).is_empty()

    def test_full_line_query_has_unit_mass(self):
        e = interval_mass_enclosure(2, LEBESGUE_2, Fraction(-1), Fraction(2), 8)
        assert e.lo == e.hi == 1.0
        assert e.log_hi == pytest.approx(0.0, abs=1e-12)

    def test_uniform_cascade_reproduces_length(self):
        e = interval_mass_enclosure(
            2, LEBESGUE_2, Fraction(1, 8), Fraction(5, 8), 16
        )
        assert e.lo == e.hi == 0.5

    def test_left_endpoint_on_cell_boundary_releases_the_cell(self):
        e = interval_mass_enclosure(2, LEBESGUE_2, Fraction(1, 4), Fraction(2), 16)
        assert e.lo == e.hi == 0.75

    def test_right_endpoint_on_cell_boundary_discards_the_cell(self):
        e = interval_mass_enclosure(2, LEBESGUE_2, Fraction(-1), Fraction(1, 4), 16)
        assert e.lo == e.hi == 0.25

    def test_middle_third_of_cantor_weights_carries_no_mass(self):
        e = interval_mass_enclosure(
            3, CANTOR_3, Fraction(1, 3), Fraction(2, 3), 20
        )
        assert e.is_empty()

    def test_cantor_weights_left_third(self):
        e = interval_mass_enclosure(3, CANTOR_3, Fraction(-1), Fraction(1, 3), 20)
        assert e.lo == e.hi == 0.5

    def test_straddling_cells_inflate_only_the_upper_bound(self):
        # 1/7 never terminates in base 2, so exactly one tight cell per
        # level survives to the cap and its full mass lands in hi
        cap = 12
        e = interval_mass_enclosure(2, LEBESGUE_2, Fraction(1, 7), Fraction(2), cap)
        assert e.width == 2.0**-cap
        assert e.lo <= 6.0 / 7.0 <= e.hi

    def test_deeper_cap_tightens_the_enclosure(self):
        widths = [
            interval_mass_enclosure(
                2, LEBESGUE_2, Fraction(1, 7), Fraction(6, 7), cap
            ).width
            for cap in (8, 16, 24)
        ]
        assert widths[0] > widths[1] > widths[2]

    def test_chain_window_reweights_two_levels_of_middles(self):
        ratios = (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
        windows = ((1, Fraction(1, 2)),)
        mid = interval_mass_enclosure(
            3, ratios, Fraction(1, 3), Fraction(2, 3), 20, windows=windows
        )
        assert mid.lo == mid.hi == pytest.approx(1.0 / 3.0, abs=1e-15)
        inner = interval_mass_enclosure(
            3, ratios, Fraction(4, 9), Fraction(5, 9), 20, windows=windows
        )
        assert inner.lo == inner.hi == pytest.approx(1.0 / 6.0, abs=1e-15)
        innermost = interval_mass_enclosure(
            3, ratios, Fraction(13, 27), Fraction(14, 27), 20, windows=windows
        )
        assert innermost.lo == innermost.hi == pytest.approx(1.0 / 12.0, abs=1e-15)

    def test_log_bounds_agree_with_linear_bounds(self):
        e = interval_mass_enclosure(
            3, CANTOR_3, Fraction(1, 100), Fraction(1, 5), 30
        )
        assert math.exp(e.log_lo) == pytest.approx(e.lo, rel=1e-12)
        assert math.exp(e.log_hi) == pytest.approx(e.hi, rel=1e-12)


class TestSuggestedCap:
    def test_halving_ratio_guard_is_sixty_levels(self):
        assert suggested_cap(10, 0.5) == 70

    def test_guard_never_drops_below_eight(self):
        assert suggested_cap(10, 1e-9) == 18

    def test_degenerate_ratio_needs_one_level(self):
        assert suggested_cap(10, 0.0) == 11

    def test_contracting_ratio_required(self):
        with pytest.raises(ValueError, match="ratios must be below 1"):
            suggested_cap(10, 1.0)


class TestBackendDispatch:
    def test_env_override_forces_pure(self, monkeypatch):
        monkeypatch.setenv("PHIDIM_PURE", "1")
        assert kernel_backend() == "pure"

    def test_backend_is_reported(self, monkeypatch):
        monkeypatch.delenv("PHIDIM_PURE", raising=False)
        assert kernel_backend() in ("pure", "compiled")


def _random_query(rng: random.Random):
    base = rng.choice((2, 3, 3, 5))
    weights = [rng.randint(0, 6) for _ in range(base)]
    if sum(weights) == 0:
        weights[rng.randrange(base)] = 1
    total = sum(weights)
    ratios = tuple(Fraction(w, total) for w in weights)
    den = rng.choice((64, 81, 243, 1024, 7, 13, 729))
    a = Fraction(rng.randint(-2, den - 1), den)
    c = a + Fraction(rng.randint(1, den), den)
    cap = rng.randint(3, 28)
    windows = ()
    if base == 3 and rng.random() < 0.5:
        starts = sorted(rng.sample(range(1, 8), rng.randint(1, 2)))
        windows = tuple(
            (s, Fraction(rng.randint(1, 9), 10)) for s in starts
        )
    return base, ratios, a, c, cap, windows


@pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")
class TestCompiledMatchesPure:
    def test_backends_bit_identical_on_random_grid(self, monkeypatch):
        rng = random.Random(20240917)
        for _ in range(250):
            base, ratios, a, c, cap, windows = _random_query(rng)
            monkeypatch.delenv("PHIDIM_PURE", raising=False)
            fast = interval_mass_enclosure(base, ratios, a, c, cap, windows)
            monkeypatch.setenv("PHIDIM_PURE", "1")
            slow = interval_mass_enclosure(base, ratios, a, c, cap, windows)
            q = (base, ratios, a, c, cap, windows)
            assert fast.lo == slow.lo, q
            assert fast.hi == slow.hi, q
            assert fast.log_lo == slow.log_lo, q
            assert fast.log_hi == slow.log_hi, q

    def test_backends_bit_identical_on_deep_chain_query(self, monkeypatch):
        ratios = (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
        windows = ((2, Fraction(1, 3)), (5, Fraction(2, 3)))
        a, c, cap = Fraction(11, 81), Fraction(47, 81), 60
        monkeypatch.delenv("PHIDIM_PURE", raising=False)
        fast = interval_mass_enclosure(3, ratios, a, c, cap, windows)
        monkeypatch.setenv("PHIDIM_PURE", "1")
        slow = interval_mass_enclosure(3, ratios, a, c, cap, windows)
        assert (fast.lo, fast.hi, fast.log_lo, fast.log_hi) == (
            slow.lo,
            slow.hi,
            slow.log_lo,
            slow.log_hi,
        )
