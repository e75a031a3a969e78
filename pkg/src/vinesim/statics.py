"""Pressure-to-shape statics: elongation, bend equilibrium, tip forces.

With no brakes engaged the body lengthens until the skin stress carries
the pressure, P*pi*r^2 = A_film*sigma(eps). With one side locked the
moment balance around that side,

    P*pi*r^3 = 2r * (A_film*sigma(eps) + K*e^(mu*theta(eps))),

has no explicit solution once the capstan drag of the released structure
enters, so the bend strain is found by bracketing + bisection on the
strictly increasing right-hand side. Tip-force models cover both the
lengthening method and the antagonistic fPAM baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from .core import FpamSpec, RobotSpec, SegmentSpec, Side
from .jamming import capstan_drag
from .material import axial_strain_at_stress, axial_stress

# Residual tolerance relative to max(1, P*pi*r^3); bracket width tolerance
# on strain; bisection iteration cap.
RESIDUAL_RTOL = 1e-9
STRAIN_XTOL = 1e-12
MAX_ITER = 200

# Body-pressure settings for the fPAM comparison curves. The paper ran the
# muscle baseline at three body pressures (values unreported); §V-D's force
# test held 10 kPa, kept here as the middle setting.
FPAM_BODY_PRESSURES = (5e3, 10e3, 20e3)


class SolverError(RuntimeError):
    """Bisection failed to bracket or converge; indicates bad inputs."""


@dataclass(frozen=True)
class EquilibriumSolution:
    """Converged bend state for one segment with one side locked.

    inner_radius is +inf in the straight (below-breakaway) case; consumers
    building arcs must use the straight representation instead. wall_tension
    is the axial load the locked side must hold without slipping.
    """

    strain: float
    bend_angle: float  # rad
    inner_radius: float  # m
    residual: float  # N*m, |LHS - RHS| at the returned strain
    wall_tension: float  # N
    below_breakaway: bool = False


def pressure_moment(spec: RobotSpec, pressure: float) -> float:
    """Driving moment P*pi*r^3 about the locked side."""
    return pressure * math.pi * spec.radius**3


def elongation_strain(
    spec: RobotSpec, pressure: float, sheet_to_tube_derating: float = 1.0
) -> float:
    """Unjammed straight-body strain: A_film*sigma(eps) = P*pi*r^2.

    The two-regime law is piecewise linear, so the balance inverts
    exactly; in the soft regime this reduces to eps = P*pi*r^2/(E*A).
    Flat-sheet coupons stretch slightly further than the sealed tube;
    the unquantified discrepancy is exposed as a derating factor on the
    resulting strain, default 1 (no derating).
    """
    if pressure < 0:
        raise ValueError("pressure must be non-negative")
    if not 0.0 < sheet_to_tube_derating <= 1.0:
        raise ValueError("sheet_to_tube_derating must be in (0, 1]")
    axial_force = pressure * math.pi * spec.radius**2
    return sheet_to_tube_derating * axial_strain_at_stress(
        spec.skin, axial_force / spec.film_area
    )


def _bend_rhs(spec: RobotSpec, seg_length: float, strain: float) -> float:
    """Resisting moment 2r*(A*sigma(eps) + K*e^(mu*theta)) at a strain."""
    theta = strain * seg_length / (2.0 * spec.radius)
    tension = spec.film_area * axial_stress(spec.skin, strain) + capstan_drag(
        spec.jamming, theta
    )
    return 2.0 * spec.radius * tension


def wall_tension_at(spec: RobotSpec, seg_length: float, strain: float) -> float:
    """Axial load on the locked side: A*sigma(eps) + K*e^(mu*theta)."""
    theta = strain * seg_length / (2.0 * spec.radius)
    return spec.film_area * axial_stress(spec.skin, strain) + capstan_drag(
        spec.jamming, theta
    )


def solve_bend_equilibrium(
    spec: RobotSpec,
    seg: SegmentSpec,
    pressure: float,
    jammed_side: Side,
    rtol: float = RESIDUAL_RTOL,
    xtol: float = STRAIN_XTOL,
) -> EquilibriumSolution:
    """Bend strain of one segment with `jammed_side` locked, by bisection.

    The right-hand side is strictly increasing in strain (elastic term by
    the hardening material law, capstan term by the exponential), so a
    doubling bracket followed by bisection converges unconditionally. If
    the static capstan drag already exceeds the pressure moment at zero
    strain the segment does not break away and stays straight.
    """
    if pressure < 0:
        raise ValueError("pressure must be non-negative")
    del jammed_side  # the balance is side-symmetric; callers keep the side
    lhs = pressure_moment(spec, pressure)
    scale = max(1.0, lhs)
    l0 = seg.rest_length

    rhs_zero = _bend_rhs(spec, l0, 0.0)
    if lhs <= rhs_zero:
        return EquilibriumSolution(
            strain=0.0,
            bend_angle=0.0,
            inner_radius=math.inf,
            residual=0.0,
            wall_tension=wall_tension_at(spec, l0, 0.0),
            below_breakaway=True,
        )

    lo, hi = 0.0, 0.25
    for _ in range(MAX_ITER):
        if _bend_rhs(spec, l0, hi) >= lhs:
            break
        lo = hi
        hi *= 2.0
    else:
        raise SolverError("failed to bracket bend equilibrium")

    strain = hi
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        f_mid = _bend_rhs(spec, l0, mid) - lhs
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
        strain = 0.5 * (lo + hi)
        if hi - lo <= xtol and abs(_bend_rhs(spec, l0, strain) - lhs) <= rtol * scale:
            break

    residual = abs(_bend_rhs(spec, l0, strain) - lhs)
    if residual > rtol * scale:
        raise SolverError(f"bisection residual {residual:.3e} above tolerance")
    theta = strain * l0 / (2.0 * spec.radius)
    return EquilibriumSolution(
        strain=strain,
        bend_angle=theta,
        inner_radius=2.0 * spec.radius / strain,
        residual=residual,
        wall_tension=wall_tension_at(spec, l0, strain),
    )


def closed_form_soft_strain(spec: RobotSpec, pressure: float) -> float:
    """Frictionless soft-regime limit eps = P*pi*r^3 / (2r*E*A)."""
    return pressure_moment(spec, pressure) / (
        2.0 * spec.radius * spec.skin.axial_modulus_soft * spec.film_area
    )


def tip_force_lengthening(
    spec: RobotSpec, pressure: float, constrained_strain: float, lever: float
) -> float:
    """Perpendicular tip force while held at a given outer-side strain, N.

    The bending length is the lever itself (force applied at the lever
    distance along the body), so theta follows the arc relation at that
    length. Negative values mean the robot cannot lift at that deflection.
    """
    if lever <= 0:
        raise ValueError("lever must be positive")
    if constrained_strain < 0:
        raise ValueError("constrained_strain must be non-negative")
    net_moment = pressure_moment(spec, pressure) - _bend_rhs(spec, lever, constrained_strain)
    return net_moment / lever


def fpam_muscle_force(fpam: FpamSpec, muscle_strain: float, muscle_pressure: Optional[float] = None) -> float:
    """Ideal McKibben tension pi*r_m^2*P_m*(a*(1-eps)^2 - b), N."""
    if not 0.0 <= muscle_strain < 1.0:
        raise ValueError("muscle_strain must be in [0, 1)")
    p_m = fpam.muscle_pressure if muscle_pressure is None else muscle_pressure
    return (
        math.pi
        * fpam.muscle_radius**2
        * p_m
        * (fpam.a_coeff * (1.0 - muscle_strain) ** 2 - fpam.b_coeff)
    )


def tip_force_fpam(
    spec: RobotSpec,
    fpam: FpamSpec,
    body_pressure: float,
    muscle_strain: float,
    lever: float,
) -> float:
    """Perpendicular tip force of the contracting-muscle baseline, N.

    The body pressure opposes the muscle, so this falls with P where the
    lengthening method rises with it.
    """
    if lever <= 0:
        raise ValueError("lever must be positive")
    muscle_moment = 2.0 * spec.radius * fpam_muscle_force(fpam, muscle_strain)
    return (muscle_moment - pressure_moment(spec, body_pressure)) / lever


def fpam_contraction_strain(
    spec: RobotSpec,
    fpam: FpamSpec,
    body_pressure: float,
    muscle_pressure: Optional[float] = None,
    xtol: float = STRAIN_XTOL,
) -> float:
    """Muscle contraction strain where its moment balances the body.

    Solves 2r*F_m(eps) = P*pi*r^3 + 2r*A_film*sigma(eps) on
    [0, free_strain]; the left side falls and the right side rises with
    strain, so the root is unique. Returns 0 when the muscle cannot
    overcome the pressurized body at all.
    """
    p_m = fpam.muscle_pressure if muscle_pressure is None else muscle_pressure

    def imbalance(eps: float) -> float:
        resist = body_pressure * math.pi * spec.radius**2 / 2.0 + spec.film_area * axial_stress(
            spec.skin, eps
        )
        return fpam_muscle_force(fpam, eps, p_m) - resist

    if imbalance(0.0) <= 0.0:
        return 0.0
    lo, hi = 0.0, fpam.free_strain
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if imbalance(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class FpamMode:
    """fPAM sweep configuration: muscle spec plus fixed body pressure."""

    fpam: FpamSpec
    body_pressure: float


@dataclass(frozen=True)
class SweepPoint:
    pressure: float  # Pa, actuation pressure (body or muscle by mode)
    strain: float
    bend_angle: float  # rad
    inner_radius: float  # m, +inf when straight
    curvature: float  # 1/m
    wall_tension: float  # N; muscle tension in fPAM mode


def curvature_point(spec: RobotSpec, sol: EquilibriumSolution, pressure: float) -> SweepPoint:
    curvature = 0.0 if sol.below_breakaway else 1.0 / sol.inner_radius
    return SweepPoint(
        pressure=pressure,
        strain=sol.strain,
        bend_angle=sol.bend_angle,
        inner_radius=sol.inner_radius,
        curvature=curvature,
        wall_tension=sol.wall_tension,
    )


def curvature_sweep(
    spec: RobotSpec,
    pressures: Sequence[float],
    mode: Union[str, FpamMode] = "lengthening",
    segment_index: int = 0,
) -> List[SweepPoint]:
    """Curvature vs actuation pressure for either steering method.

    Lengthening mode sweeps body pressure through the bend equilibrium of
    the chosen segment. fPAM mode sweeps muscle pressure at the mode's
    fixed body pressure; curvature follows the contraction strain through
    the same arc relation (the shortened side mirrors the lengthened one).
    """
    if list(pressures) != sorted(pressures):
        raise ValueError("pressures must be sorted ascending")
    points: List[SweepPoint] = []
    if isinstance(mode, FpamMode):
        for p_m in pressures:
            eps = fpam_contraction_strain(spec, mode.fpam, mode.body_pressure, p_m)
            if eps <= 0.0:
                points.append(SweepPoint(p_m, 0.0, 0.0, math.inf, 0.0, 0.0))
                continue
            seg_length = spec.segments[segment_index].rest_length
            theta = eps * seg_length / (2.0 * spec.radius)
            points.append(
                SweepPoint(
                    pressure=p_m,
                    strain=eps,
                    bend_angle=theta,
                    inner_radius=2.0 * spec.radius / eps,
                    curvature=eps / (2.0 * spec.radius),
                    wall_tension=fpam_muscle_force(mode.fpam, eps, p_m),
                )
            )
        return points
    if mode != "lengthening":
        raise ValueError(f"unknown sweep mode {mode!r}")
    seg = spec.segments[segment_index]
    for p in pressures:
        sol = solve_bend_equilibrium(spec, seg, p, Side.LEFT)
        points.append(curvature_point(spec, sol, p))
    return points


def bending_stiffness_trend(spec: RobotSpec, pressure: float, coeff: float = 1.0) -> float:
    """Monotone normalized-stiffness trend c*P*r^3 (N*m/deg).

    Trend fidelity only: stiffness rises linearly with inflation pressure;
    the constant is a calibration knob, not a measured value.
    """
    if pressure < 0:
        raise ValueError("pressure must be non-negative")
    return coeff * pressure * spec.radius**3
