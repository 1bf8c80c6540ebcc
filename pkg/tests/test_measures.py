"""Measure-oracle tests: exact ball masses, window sums, support geometry,
and the probe-center heuristics for each bundled family."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from phidim.enclosure import EmptyBallError
from phidim.measures import (
    CapabilityError,
    CentralCantorSpec,
    ChainCascadeSpec,
    DiscreteSpec,
    LebesgueSpec,
    PointMassSpec,
    SelfSimilarSpec,
    StationaryCascadeSpec,
    ball_measure,
    cascade_cell_measure,
    local_dimension_estimate,
    ssc_cylinder_measure,
    support_net,
)

F = Fraction


class TestLebesgue:
    spec = LebesgueSpec()

    def test_interior_ball_is_its_length(self):
        e = self.spec.ball_measure(F(1, 2), F(1, 4))
        assert e.lo == e.hi == 0.5

    def test_ball_clips_at_the_unit_interval(self):
        e = self.spec.ball_measure(F(0), F(1, 4))
        assert e.lo == e.hi == 0.25

    def test_far_ball_raises(self):
        with pytest.raises(EmptyBallError):
            self.spec.ball_measure(F(2), F(1, 2))

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ValueError, match="radius must be positive"):
            self.spec.ball_measure(F(1, 2), F(0))

    def test_support_and_total(self):
        assert self.spec.support_bounds() == (F(0), F(1))
        assert self.spec.total_mass().lo == 1.0
        net = self.spec.support_net(F(1, 4))
        assert net[0] == 0 and net[-1] == 1
        assert all(b - a <= F(1, 4) for a, b in zip(net, net[1:]))


class TestPointMass:
    def test_ball_containing_the_atom(self):
        spec = PointMassSpec(at=F(1, 3))
        assert spec.ball_measure(F(1, 3), F(1, 100)).lo == 1.0

    def test_ball_is_open_at_its_boundary(self):
        spec = PointMassSpec(at=F(1, 2))
        with pytest.raises(EmptyBallError):
            spec.ball_measure(F(1, 4), F(1, 4))

    def test_support_is_the_atom(self):
        spec = PointMassSpec(at=F(2, 5))
        assert spec.support_bounds() == (F(2, 5), F(2, 5))
        assert spec.hint_centers(F(1, 10)) == [F(2, 5)]


class TestCentralCantor:
    spec = CentralCantorSpec()

    def test_schedule_validation(self):
        with pytest.raises(ValueError, match="nonempty"):
            CentralCantorSpec(schedule=())
        with pytest.raises(ValueError, match=r"\(0, 1/2\]"):
            CentralCantorSpec(schedule=(F(2, 3),))

    def test_cylinder_geometry(self):
        mass, (lo, hi) = self.spec.cylinder((0,))
        assert (mass, lo, hi) == (F(1, 2), F(0), F(1, 3))
        mass, (lo, hi) = self.spec.cylinder((1, 1))
        assert (mass, lo, hi) == (F(1, 4), F(8, 9), F(1))

    def test_alternating_schedule_cylinder(self):
        alt = CentralCantorSpec(schedule=(F(1, 3), F(1, 4)))
        mass, (lo, hi) = alt.cylinder((1, 1))
        assert (mass, lo, hi) == (F(1, 4), F(11, 12), F(1))

    def test_ball_capturing_one_level_two_cell(self):
        e = self.spec.ball_measure(F(0), F(1, 9) + F(1, 100))
        assert e.lo == e.hi == 0.25

    def test_ball_around_interior_endpoint(self):
        e = self.spec.ball_measure(F(1, 3), F(1, 6))
        assert e.lo == e.hi == 0.25

    def test_ball_inside_the_removed_middle_raises(self):
        with pytest.raises(EmptyBallError, match="misses the Cantor set"):
            self.spec.ball_measure(F(1, 2), F(1, 6))

    def test_support_net_lists_cell_endpoints(self):
        net = self.spec.support_net(F(1, 27))
        assert len(net) == 16
        assert net[0] == 0 and net[-1] == 1
        assert F(1, 27) in net and F(2, 3) in net

    def test_local_dimension_matches_log2_over_log3(self):
        ld = local_dimension_estimate(self.spec, 0, base=3, n_max=16)
        assert ld.lower == pytest.approx(0.6309297535714571, abs=1e-15)
        assert ld.upper == pytest.approx(0.6309297535714575, abs=1e-15)
        assert ld.regression == pytest.approx(0.6309297535714574, abs=1e-15)
        assert ld.levels_used == 15


class TestStationaryCascade:
    spec = StationaryCascadeSpec(base=2, ratios=(F(2, 3), F(1, 3)))

    def test_ratio_validation(self):
        with pytest.raises(ValueError, match="sum to 1"):
            StationaryCascadeSpec(base=2, ratios=(F(1, 2), F(1, 3)))
        with pytest.raises(ValueError, match="one ratio per digit"):
            StationaryCascadeSpec(base=3, ratios=(F(1, 2), F(1, 2)))
        with pytest.raises(ValueError, match="nonnegative"):
            StationaryCascadeSpec(base=2, ratios=(F(3, 2), F(-1, 2)))

    def test_cell_measure_is_the_digit_product(self):
        assert self.spec.cell_measure((0, 1)) == F(2, 9)
        assert cascade_cell_measure(self.spec, [0, 1]) == F(2, 9)
        with pytest.raises(ValueError, match="out of range"):
            self.spec.cell_measure((0, 2))

    def test_cell_log_measure_matches_exact_value(self):
        word = (0, 1, 1, 0)
        assert self.spec.cell_log_measure(word) == pytest.approx(
            math.log(float(self.spec.cell_measure(word))), abs=1e-14
        )

    def test_interval_measure_of_a_cell_is_exact(self):
        e = self.spec.interval_measure(F(1, 4), F(1, 2))
        assert e.lo == e.hi == float(F(2, 9))

    def test_ball_in_a_zero_ratio_gap_raises(self):
        gapped = StationaryCascadeSpec(base=3, ratios=(F(1, 2), F(0), F(1, 2)))
        with pytest.raises(EmptyBallError, match="has no mass"):
            gapped.ball_measure(F(1, 2), F(1, 12))

    def test_total_mass_is_one(self):
        assert self.spec.total_mass().lo == 1.0
        assert abs(self.spec.interval_measure(F(-1), F(2)).log_midpoint) == 0.0


class TestChainCascade:
    def test_geometric_schedule_layout(self):
        sched = ChainCascadeSpec.geometric_schedule(20, 9, 2, F(1, 4))
        assert sched == ((20, F(1, 4)), (180, F(1, 4)))

    def test_geometric_schedule_validation(self):
        with pytest.raises(ValueError, match="factor must be at least 3"):
            ChainCascadeSpec.geometric_schedule(10, 2, 2, F(1, 2))
        with pytest.raises(ValueError, match="one ratio per chain"):
            ChainCascadeSpec.geometric_schedule(10, 3, 2, [F(1, 2)])

    def test_schedule_validation(self):
        with pytest.raises(ValueError, match="start at 2"):
            ChainCascadeSpec(schedule=((1, F(1, 2)),))
        with pytest.raises(ValueError, match="disjoint and increasing"):
            ChainCascadeSpec(schedule=((2, F(1, 2)), (4, F(1, 2))))
        with pytest.raises(ValueError, match=r"\(0, 1\]"):
            ChainCascadeSpec(schedule=((2, F(3, 2)),))

    def test_chain_midpoint(self):
        spec = ChainCascadeSpec(schedule=((4, F(1, 2)),))
        assert spec.chain_midpoint(0) == F(3, 2) / 81

    def test_cell_masses_along_the_reweighted_chain(self):
        spec = ChainCascadeSpec(schedule=((2, F(1, 2)),))
        # the chain starts at the level-2 middle cell and re-weights the
        # next n + 1 = 3 levels of children before reverting to thirds
        assert spec.cell_measure((0, 1)) == F(1, 9)
        assert spec.cell_measure((0, 1, 1)) == F(1, 18)
        assert spec.cell_measure((0, 1, 0)) == F(1, 36)
        assert spec.cell_measure((0, 1, 1, 1)) == F(1, 36)
        assert spec.cell_measure((0, 1, 1, 1, 1)) == F(1, 72)
        assert spec.cell_measure((0, 1, 1, 1, 1, 1)) == F(1, 216)

    def test_interval_measure_agrees_with_cell_measure(self):
        spec = ChainCascadeSpec(schedule=((2, F(1, 2)),))
        e = spec.interval_measure(F(4, 27), F(5, 27))
        assert e.lo == e.hi == float(F(1, 18))

    def test_children_of_any_cell_conserve_its_mass(self):
        spec = ChainCascadeSpec(schedule=((2, F(1, 3)), (8, F(1, 2))))
        for word in [(), (0,), (0, 1), (0, 1, 1), (2, 2, 2)]:
            parent = spec.cell_measure(word)
            kids = sum(spec.cell_measure(word + (d,)) for d in range(3))
            assert kids == parent

    def test_full_line_mass_is_one(self):
        spec = ChainCascadeSpec(schedule=((3, F(2, 3)),))
        assert abs(spec.interval_measure(F(-1), F(2)).log_midpoint) < 1e-9


class TestSelfSimilar:
    spec = SelfSimilarSpec(
        ratios=(F(1, 3), F(1, 3)),
        offsets=(F(0), F(2, 3)),
        probs=(F(3, 4), F(1, 4)),
    )

    def test_validation(self):
        with pytest.raises(ValueError, match="sum to 1"):
            SelfSimilarSpec((F(1, 3), F(1, 3)), (F(0), F(2, 3)), (F(1, 2), F(1, 4)))
        with pytest.raises(ValueError, match="disjoint"):
            SelfSimilarSpec((F(1, 2), F(1, 2)), (F(0), F(1, 2)), (F(1, 2), F(1, 2)))
        with pytest.raises(ValueError, match="must be positive"):
            SelfSimilarSpec((F(1, 3), F(1, 3)), (F(0), F(2, 3)), (F(1), F(0)))

    def test_hull_and_gap(self):
        assert self.spec.hull() == (F(0), F(1))
        assert self.spec.separation_gap() == F(1, 3)

    def test_cylinder_mass_and_image(self):
        mass, (lo, hi) = ssc_cylinder_measure(self.spec, (1, 0))
        assert mass == F(1, 4) * F(3, 4)
        assert (lo, hi) == (F(2, 3), F(7, 9))

    def test_cylinder_needs_strong_separation(self):
        osc = SelfSimilarSpec(
            ratios=(F(1, 2), F(1, 2)),
            offsets=(F(0), F(1, 2)),
            probs=(F(1, 2), F(1, 2)),
            separation="osc",
        )
        with pytest.raises(CapabilityError):
            ssc_cylinder_measure(osc, (0,))
        with pytest.raises(CapabilityError):
            osc.separation_gap()

    def test_ball_measure_recovers_cylinder_mass(self):
        e = self.spec.ball_measure(F(1, 6), F(1, 6) + F(1, 100))
        assert e.lo == e.hi == 0.75

    def test_ball_in_the_separation_gap_raises(self):
        with pytest.raises(EmptyBallError, match="misses the attractor"):
            self.spec.ball_measure(F(1, 2), F(1, 12))

    def test_osc_overlapping_hull_still_normalizes(self):
        osc = SelfSimilarSpec(
            ratios=(F(1, 2), F(1, 2)),
            offsets=(F(0), F(1, 2)),
            probs=(F(2, 3), F(1, 3)),
            separation="osc",
        )
        e = osc.ball_measure(F(1, 2), F(3, 4))
        assert e.lo <= 1.0 <= e.hi + 1e-12
        assert e.relative_width() < 1e-12


class TestDiscreteValidation:
    def test_kind_checks(self):
        with pytest.raises(ValueError, match="position_kind"):
            DiscreteSpec("geometric", "exp", F(2), F(2))
        with pytest.raises(ValueError, match="weight_kind"):
            DiscreteSpec("exp", "uniform", F(2), F(2))

    def test_parameter_ranges(self):
        with pytest.raises(ValueError, match="lam > 0"):
            DiscreteSpec("poly", "exp", F(0), F(2))
        with pytest.raises(ValueError, match="integer lam"):
            DiscreteSpec("poly", "exp", F(3, 2), F(2))
        with pytest.raises(ValueError, match="lam > 1"):
            DiscreteSpec("exp", "exp", F(1), F(2))
        with pytest.raises(ValueError, match="beta > 1"):
            DiscreteSpec("exp", "exp", F(2), F(1))
        with pytest.raises(ValueError, match="p0"):
            DiscreteSpec("exp", "exp", F(2), F(2), p0=F(-1, 10))
        with pytest.raises(ValueError, match="truncate"):
            DiscreteSpec("exp", "exp", F(2), F(2), truncate=0)

    def test_irrational_weight_has_no_exact_form(self):
        spec = DiscreteSpec("exp", "poly", F(2), F(3, 2))
        with pytest.raises(ValueError, match="irrational"):
            spec.weight_exact(2)


class TestDiscreteExpExp:
    # atoms at 3^-n with weights 2^-n: every tail sum is exact
    spec = DiscreteSpec("exp", "exp", F(3), F(2))

    @pytest.mark.parametrize("k", [3, 8])
    def test_open_ball_at_origin_excludes_the_boundary_atom(self, k):
        e = self.spec.ball_measure(F(0), F(1, 3**k))
        assert e.lo == e.hi == 2.0**-k

    @pytest.mark.parametrize("k", [3, 8])
    def test_doubling_the_radius_admits_one_more_atom(self, k):
        e = self.spec.ball_measure(F(0), F(2, 3**k))
        assert e.lo == e.hi == 2.0 ** -(k - 1)

    def test_ball_around_an_isolated_atom(self):
        e = self.spec.ball_measure(self.spec.position(5), F(1, 3**7))
        assert e.lo == e.hi == 2.0**-5

    def test_ball_between_atoms_raises(self):
        with pytest.raises(EmptyBallError, match="contains no atoms"):
            self.spec.ball_measure(F(1, 2), F(1, 100))

    def test_exact_window_sum(self):
        e = self.spec.weight_sum(3, 7)
        assert e.lo == e.hi == float(F(1, 4) - F(1, 128))

    def test_full_tail_sums_to_one(self):
        e = self.spec.weight_sum(1, None)
        assert e.lo == e.hi == 1.0

    def test_dense_hints_list_every_atom_above_the_radius(self):
        hints = self.spec.hint_centers(F(1, 3**5))
        assert hints == [F(0)] + [F(1, 3**n) for n in range(1, 7)]


class TestDiscretePoly:
    def test_train_hints_plus_mass_transition_boundary(self):
        spec = DiscreteSpec("poly", "exp", F(1), F(2))
        hints = spec.hint_centers(F(1, 10))
        train = [F(0), F(1), F(1, 2), F(1, 4), F(1, 8), F(1, 16)]
        assert hints == train + [F(1, 9), F(1, 10), F(1, 11)]

    def test_polynomial_tail_brackets_the_zeta_series(self):
        spec = DiscreteSpec("exp", "poly", F(3), F(2), p0=F(1, 10))
        total = spec.total_mass()
        expected = 0.1 + math.pi**2 / 6
        assert total.width < 1e-9
        assert total.lo <= expected <= total.hi

    def test_huge_window_takes_the_log_domain_path(self):
        # positions 1/n force the tail window past index 1e8; the exact
        # geometric sum would need a ~1e8-bit integer, so the log route
        # must kick in and stay both fast and finite
        spec = DiscreteSpec("poly", "exp", F(1), F(2))
        e = spec.ball_measure(F(0), F(1, 10**8))
        assert e.lo == e.hi == 0.0  # linear fields underflow
        assert not e.is_empty()
        assert e.log_midpoint / math.log(2) == pytest.approx(-1e8, rel=1e-12)

    def test_truncated_spec_enumerates_its_atoms(self):
        spec = DiscreteSpec("exp", "exp", F(3), F(2), truncate=3)
        assert spec.atoms() == [
            (F(1, 3), F(1, 2)),
            (F(1, 9), F(1, 4)),
            (F(1, 27), F(1, 8)),
        ]
        assert spec.support_bounds() == (F(1, 27), F(1, 3))

    def test_untruncated_atoms_rejected(self):
        with pytest.raises(ValueError, match="truncated"):
            DiscreteSpec("exp", "exp", F(3), F(2)).atoms()

    def test_origin_joins_support_when_weighted_or_accumulating(self):
        spec = DiscreteSpec("exp", "exp", F(3), F(2), p0=F(1, 10))
        assert spec.support_bounds() == (F(0), F(1, 3))
        net = spec.support_net(F(1, 100))
        assert F(0) in net and F(1, 3) in net


class TestPackageHelpers:
    def test_dispatchers_defer_to_the_spec(self):
        spec = LebesgueSpec()
        assert ball_measure(spec, F(1, 2), F(1, 4)).lo == 0.5
        assert support_net(spec, F(1, 2)) == spec.support_net(F(1, 2))
