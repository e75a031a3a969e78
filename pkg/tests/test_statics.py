import math
import random
from dataclasses import replace

import numpy as np
import pytest

from vinesim.core import FpamSpec, JammingUnit, SegmentSpec, Side
from vinesim.statics import (
    FPAM_BODY_PRESSURES,
    FpamMode,
    closed_form_soft_strain,
    curvature_sweep,
    bending_stiffness_trend,
    elongation_strain,
    fpam_contraction_strain,
    pressure_moment,
    solve_bend_equilibrium,
    tip_force_fpam,
    tip_force_lengthening,
)


def grid_scan_strain(spec, seg_length, pressure, de=1e-6, eps_max=3.0):
    """Independent oracle: smallest grid strain whose resisting moment
    reaches the pressure moment, scanning the stated balance directly.

    The right-hand side is monotone, so a coarse pass to find the
    bracketing cell followed by a fine pass inside it visits exactly the
    same minimizing grid point as a full 1e-6 scan would.
    """
    e_w = spec.skin.wrinkle_strain
    e_soft = spec.skin.axial_modulus_soft
    e_taut = spec.skin.axial_modulus_taut
    area = spec.film_area
    k, mu = spec.jamming.k_theta, spec.jamming.mu
    r = spec.radius
    lhs = pressure * math.pi * r**3

    def rhs(eps_arr):
        sigma = np.where(
            eps_arr <= e_w, e_soft * eps_arr, e_soft * e_w + e_taut * (eps_arr - e_w)
        )
        theta = eps_arr * seg_length / (2.0 * r)
        return 2.0 * r * (area * sigma + k * np.exp(mu * theta))

    coarse = np.arange(0.0, eps_max + 1e-3, 1e-3)
    values = rhs(coarse)
    idx = int(np.searchsorted(values >= lhs, True))
    if idx == 0:
        return 0.0
    lo = coarse[idx - 1]
    fine = lo + np.arange(0.0, 1e-3 + de, de)
    fidx = int(np.searchsorted(rhs(fine) >= lhs, True))
    return float(fine[fidx])


class TestElongation:
    def test_zero_pressure(self, spec):
        assert elongation_strain(spec, 0.0) == 0.0

    def test_hand_value_at_40kpa(self, spec):
        # P*pi*r^2 / (E*A) = 32.17 / 31.65
        expected = 40e3 * math.pi * 0.016**2 / (spec.skin.axial_modulus_soft * spec.film_area)
        assert elongation_strain(spec, 40e3) == pytest.approx(expected, rel=1e-12)
        assert elongation_strain(spec, 40e3) == pytest.approx(1.02, abs=0.01)

    def test_doubles_length_within_range(self, spec):
        strains = [elongation_strain(spec, p) for p in np.linspace(0, 60e3, 61)]
        assert max(strains) >= 1.0

    def test_saturates_with_taut_slope(self, spec):
        p = 60e3
        assert elongation_strain(spec, p) > spec.skin.wrinkle_strain
        dp = 1e3
        slope = (elongation_strain(spec, p + dp) - elongation_strain(spec, p)) / dp
        taut_slope = math.pi * spec.radius**2 / (spec.skin.axial_modulus_taut * spec.film_area)
        assert slope == pytest.approx(taut_slope, rel=1e-9)

    def test_negative_pressure_rejected(self, spec):
        with pytest.raises(ValueError):
            elongation_strain(spec, -1.0)


class TestBendEquilibrium:
    def test_zero_pressure_below_breakaway(self, spec):
        sol = solve_bend_equilibrium(spec, spec.segments[0], 0.0, Side.LEFT)
        assert sol.below_breakaway
        assert sol.strain == 0.0
        assert sol.bend_angle == 0.0

    def test_spec_example_160mm(self, spec):
        seg = SegmentSpec(rest_length=0.160)
        sol = solve_bend_equilibrium(spec, seg, 40e3, Side.LEFT)
        assert sol.strain == pytest.approx(0.40, abs=0.01)
        assert sol.bend_angle == pytest.approx(2.0, abs=0.05)
        oracle = grid_scan_strain(spec, 0.160, 40e3)
        assert sol.strain == pytest.approx(oracle, abs=2e-6)

    def test_residual_within_tolerance(self, spec):
        sol = solve_bend_equilibrium(spec, spec.segments[0], 47e3, Side.LEFT)
        assert sol.residual <= 1e-9 * max(1.0, pressure_moment(spec, 47e3))

    def test_consistency_with_arc_relations(self, spec):
        seg = spec.segments[0]
        sol = solve_bend_equilibrium(spec, seg, 55e3, Side.LEFT)
        assert sol.inner_radius == pytest.approx(2 * spec.radius / sol.strain, rel=1e-12)
        assert sol.bend_angle == pytest.approx(
            sol.strain * seg.rest_length / (2 * spec.radius), rel=1e-12
        )

    def test_closed_form_frictionless_soft_limit(self, spec):
        frictionless = replace(spec, jamming=JammingUnit(k_theta=0.0, mu=0.0))
        sol = solve_bend_equilibrium(frictionless, spec.segments[0], 30e3, Side.LEFT)
        assert sol.strain == pytest.approx(closed_form_soft_strain(frictionless, 30e3), rel=1e-9)

    def test_monotone_in_pressure(self, spec):
        seg = spec.segments[0]
        sols = [solve_bend_equilibrium(spec, seg, p, Side.LEFT) for p in np.linspace(0, 60e3, 13)]
        strains = [s.strain for s in sols]
        tensions = [s.wall_tension for s in sols]
        assert all(b >= a for a, b in zip(strains, strains[1:]))
        assert all(b >= a for a, b in zip(tensions, tensions[1:]))

    def test_wall_tension_matches_definition(self, spec):
        from vinesim.material import axial_stress

        seg = spec.segments[0]
        sol = solve_bend_equilibrium(spec, seg, 50e3, Side.LEFT)
        expected = spec.film_area * axial_stress(spec.skin, sol.strain) + (
            spec.jamming.k_theta * math.exp(spec.jamming.mu * sol.bend_angle)
        )
        assert sol.wall_tension == pytest.approx(expected, rel=1e-12)


class TestTipForces:
    def test_zero_at_equilibrium(self, spec):
        lever = 0.16
        seg = SegmentSpec(rest_length=lever)
        sol = solve_bend_equilibrium(spec, seg, 45e3, Side.LEFT)
        force = tip_force_lengthening(spec, 45e3, sol.strain, lever)
        assert abs(force) <= 1e-9 / lever

    def test_hand_value_at_60kpa(self, spec):
        # (P*pi*r^3 - 2r*K) / lever at zero strain
        force = tip_force_lengthening(spec, 60e3, 0.0, 0.19)
        assert force == pytest.approx(3.7, abs=0.05)

    def test_increasing_in_pressure(self, spec):
        forces = [tip_force_lengthening(spec, p, 0.1, 0.19) for p in np.linspace(0, 60e3, 5)]
        assert all(b > a for a, b in zip(forces, forces[1:]))

    def test_fpam_free_contraction_is_negative(self, spec):
        fpam = FpamSpec()
        force = tip_force_fpam(spec, fpam, 10e3, fpam.free_strain, 0.19)
        assert force == pytest.approx(-10e3 * math.pi * spec.radius**3 / 0.19, rel=1e-9)
        assert force < 0

    def test_fpam_zero_pressures_zero_force(self, spec):
        fpam = replace(FpamSpec(), muscle_pressure=0.0)
        assert tip_force_fpam(spec, fpam, 0.0, 0.0, 0.19) == 0.0

    def test_fpam_decreasing_in_body_pressure(self, spec):
        fpam = FpamSpec()
        forces = [tip_force_fpam(spec, fpam, p, 0.0, 0.19) for p in np.linspace(0, 40e3, 5)]
        assert all(b < a for a, b in zip(forces, forces[1:]))

    def test_antagonism_signs_by_finite_difference(self, spec):
        fpam = FpamSpec()
        dp = 10.0
        for p in (5e3, 15e3, 30e3, 45e3, 60e3):
            dl = tip_force_lengthening(spec, p + dp, 0.2, 0.19) - tip_force_lengthening(
                spec, p - dp, 0.2, 0.19
            )
            df = tip_force_fpam(spec, fpam, p + dp, 0.1, 0.19) - tip_force_fpam(
                spec, fpam, p - dp, 0.1, 0.19
            )
            assert dl > 0
            assert df < 0


class TestFpamContraction:
    def test_zero_when_body_dominates(self, spec):
        fpam = FpamSpec()
        assert fpam_contraction_strain(spec, fpam, 20e3) == 0.0

    def test_balance_holds_at_root(self, spec):
        from vinesim.material import axial_stress

        fpam = FpamSpec()
        eps = fpam_contraction_strain(spec, fpam, 5e3)
        assert 0 < eps < fpam.free_strain
        muscle = math.pi * fpam.muscle_radius**2 * fpam.muscle_pressure * (
            fpam.a_coeff * (1 - eps) ** 2 - fpam.b_coeff
        )
        resist = 5e3 * math.pi * spec.radius**2 / 2 + spec.film_area * axial_stress(spec.skin, eps)
        assert muscle == pytest.approx(resist, abs=1e-6)


class TestSweeps:
    def test_lengthening_monotone_curvature(self, spec):
        pressures = list(np.linspace(0, 60e3, 13))
        points = curvature_sweep(spec, pressures, "lengthening")
        curvatures = [p.curvature for p in points]
        assert curvatures[0] == 0.0
        assert all(b >= a for a, b in zip(curvatures, curvatures[1:]))

    def test_min_radius_in_measured_band(self, spec):
        points = curvature_sweep(spec, [60e3], "lengthening")
        r_mm = points[0].inner_radius * 1e3
        assert 44.0 <= r_mm <= 52.0

    def test_fpam_ratio_at_least_3(self, spec):
        lengthening = curvature_sweep(spec, [60e3], "lengthening")[0].curvature
        fpam = FpamSpec()
        best = max(
            curvature_sweep(spec, [60e3], FpamMode(fpam, body_p))[0].curvature
            for body_p in FPAM_BODY_PRESSURES
        )
        assert best > 0
        assert lengthening >= 3.0 * best

    def test_fpam_curvature_decreases_with_body_pressure(self, spec):
        fpam = FpamSpec()
        curvatures = [
            curvature_sweep(spec, [60e3], FpamMode(fpam, body_p))[0].curvature
            for body_p in FPAM_BODY_PRESSURES
        ]
        assert all(b < a for a, b in zip(curvatures, curvatures[1:]))

    def test_unsorted_pressures_rejected(self, spec):
        with pytest.raises(ValueError):
            curvature_sweep(spec, [10e3, 5e3])


class TestStiffnessTrend:
    def test_zero_at_zero_pressure(self, spec):
        assert bending_stiffness_trend(spec, 0.0) == 0.0

    def test_linear_in_pressure(self, spec):
        assert bending_stiffness_trend(spec, 40e3) == pytest.approx(
            2 * bending_stiffness_trend(spec, 20e3), rel=1e-12
        )

    def test_monotone_over_ten_point_sweep(self, spec):
        values = [bending_stiffness_trend(spec, p) for p in np.linspace(0, 60e3, 10)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestRandomizedSolver:
    def test_solver_matches_grid_oracle(self, spec):
        rng = random.Random(20260810)
        for _ in range(25):
            pressure = rng.uniform(0, 60e3)
            k = rng.uniform(0.5, 5.0)
            mu = rng.uniform(0.0, 0.5)
            tweaked = replace(spec, jamming=JammingUnit(k_theta=k, mu=mu))
            sol = solve_bend_equilibrium(tweaked, spec.segments[0], pressure, Side.LEFT)
            oracle = grid_scan_strain(tweaked, spec.segments[0].rest_length, pressure)
            assert sol.strain == pytest.approx(oracle, abs=2e-6)
            assert sol.residual <= 1e-9 * max(1.0, pressure_moment(tweaked, pressure))
