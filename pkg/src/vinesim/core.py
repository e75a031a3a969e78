"""Shared domain types and unit conventions for the vine-robot toolkit.

Everything internal is SI: pressures in Pa, lengths in m, forces in N,
angles in rad. CLI / scenario-file / wire interfaces speak kPa, mm, deg
and grams and convert at the boundary (see `vinesim.scenario`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

# Paper-default calibration for the 32 mm diameter robot.
DEFAULT_RADIUS = 0.016  # m
DEFAULT_THICKNESS = 159e-6  # m, 52 + 65 + 42 um laminate stack
DEFAULT_AXIAL_MODULUS_SOFT = 1.98e6  # Pa, longitudinal unwrinkling regime
DEFAULT_CIRC_MODULUS = 879.1e6  # Pa, transverse (wrinkle-free) direction
DEFAULT_WRINKLE_STRAIN = 1.2  # strain at which wrinkles pull taut
DEFAULT_PRESTRETCH_COEFF = 0.6  # slope of pre-stretch -> max-extension line
# Placeholder capstan calibration; replace via jamming.fit_capstan on real data.
DEFAULT_K_THETA = 2.0  # N
DEFAULT_MU = 0.3
DEFAULT_OVERLAP_LENGTH = 0.030  # m, characterization unit layer overlap
DEFAULT_SEGMENT_LENGTH = 0.100  # m
DEFAULT_SEGMENT_COUNT = 4

GRAVITY = 9.81  # m/s^2

# Boundary unit helpers (external interfaces use kPa / mm / deg / g).
KPA = 1e3
MM = 1e-3


def kpa_to_pa(kpa: float) -> float:
    return kpa * 1e3


def pa_to_kpa(pa: float) -> float:
    return pa / 1e3


def mm_to_m(mm: float) -> float:
    return mm * 1e-3


def m_to_mm(m: float) -> float:
    return m * 1e3


def grams_to_kg(g: float) -> float:
    return g * 1e-3


class Side(str, Enum):
    """Planar jam / bend side. The robot is modeled in 2-D only."""

    LEFT = "left"
    RIGHT = "right"

    @property
    def sign(self) -> int:
        """+1 for left turns, -1 for right turns (heading convention)."""
        return 1 if self is Side.LEFT else -1

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class JamState(str, Enum):
    JAMMED = "jammed"
    RELEASED = "released"


class SpecValidationError(ValueError):
    """A robot description violates a type invariant; message names it."""


@dataclass(frozen=True)
class SkinMaterial:
    """Two-regime anisotropic stress-strain law of the wrinkled composite.

    The longitudinal response is soft while wrinkles unfold and stiff once
    they are taut; the transverse direction has no wrinkles and is stiff
    throughout.
    """

    axial_modulus_soft: float = DEFAULT_AXIAL_MODULUS_SOFT  # Pa
    axial_modulus_taut: float = DEFAULT_CIRC_MODULUS  # Pa, Dyneema-dominated
    circ_modulus: float = DEFAULT_CIRC_MODULUS  # Pa
    wrinkle_strain: float = DEFAULT_WRINKLE_STRAIN
    thickness: float = DEFAULT_THICKNESS  # m
    prestretch_coeff: float = DEFAULT_PRESTRETCH_COEFF

    @property
    def anisotropy_ratio(self) -> float:
        return self.circ_modulus / self.axial_modulus_soft


@dataclass(frozen=True)
class JammingUnit:
    """Capstan slip parameters and lock state of one layer-jamming body.

    A fresh unit sitting under body pressure is jammed; inflating its
    bladder releases it.
    """

    k_theta: float = DEFAULT_K_THETA  # N, capstan prefactor
    mu: float = DEFAULT_MU  # capstan exponent
    state: JamState = JamState.JAMMED
    overlap_length: float = DEFAULT_OVERLAP_LENGTH  # m, metadata only


@dataclass(frozen=True)
class SegmentSpec:
    rest_length: float  # m, depressurized length of the segment
    jam_sides: frozenset = frozenset({Side.LEFT, Side.RIGHT})


@dataclass(frozen=True)
class RobotSpec:
    """Geometry and materials of a multi-segment vine robot.

    `film_area` is the skin cross-sectional area entering the axial force
    term. When left as None it is filled by `validate_spec` with the full
    tube wall 2*pi*r*t; pass an explicit value to override.
    """

    radius: float = DEFAULT_RADIUS  # m
    segments: tuple = ()
    skin: SkinMaterial = field(default_factory=SkinMaterial)
    jamming: JammingUnit = field(default_factory=JammingUnit)  # per-side units share parameters
    film_area: Optional[float] = None  # m^2

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    @property
    def total_rest_length(self) -> float:
        return sum(seg.rest_length for seg in self.segments)


@dataclass(frozen=True)
class SegmentState:
    """Live state of one segment: outer-side strain plus per-side brakes.

    When exactly one side is jammed the robot bends toward it, so
    `bend_side` must equal the jammed side in that configuration.
    """

    strain: float = 0.0
    bend_side: Optional[Side] = None
    jam_left: JamState = JamState.RELEASED
    jam_right: JamState = JamState.RELEASED

    def jam(self, side: Side) -> JamState:
        return self.jam_left if side is Side.LEFT else self.jam_right

    @property
    def jammed_sides(self) -> tuple:
        return tuple(s for s in (Side.LEFT, Side.RIGHT) if self.jam(s) is JamState.JAMMED)


@dataclass(frozen=True)
class RobotState:
    body_pressure: float = 0.0  # Pa
    segment_states: tuple = ()
    everted_length: float = 0.0  # m, along the centerline


@dataclass(frozen=True)
class Pose:
    """Planar pose: position in m, heading in rad (ccw from +x)."""

    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0

    @property
    def position(self) -> tuple:
        return (self.x, self.y)


@dataclass(frozen=True)
class Arc:
    """One piecewise-constant-curvature element.

    Bent arcs carry the inner-wall radius and a non-negative angle; the
    centerline travels at inner_radius + robot radius. Straight arcs are a
    distinct representation (side None, angle 0) carrying a length, never
    an infinite radius.
    """

    side: Optional[Side] = None
    angle: float = 0.0  # rad
    inner_radius: Optional[float] = None  # m, bent arcs only
    length: Optional[float] = None  # m, straight arcs only

    @staticmethod
    def straight(length: float) -> "Arc":
        if length < 0:
            raise SpecValidationError("straight arc length must be non-negative")
        return Arc(side=None, angle=0.0, inner_radius=None, length=length)

    @staticmethod
    def bent(inner_radius: float, angle: float, side: Side) -> "Arc":
        if inner_radius <= 0:
            raise SpecValidationError("inner_radius must be positive for bent arcs")
        if angle < 0:
            raise SpecValidationError("arc angle must be non-negative")
        return Arc(side=side, angle=angle, inner_radius=inner_radius, length=None)

    @property
    def is_straight(self) -> bool:
        return self.side is None

    def centerline_length(self, robot_radius: float) -> float:
        if self.is_straight:
            return self.length or 0.0
        return (self.inner_radius + robot_radius) * self.angle


@dataclass(frozen=True)
class ArcChain:
    """Ordered arcs forming the everted backbone, from base to tip."""

    arcs: tuple = ()
    base_pose: Pose = field(default_factory=Pose)

    def total_length(self, robot_radius: float) -> float:
        return sum(arc.centerline_length(robot_radius) for arc in self.arcs)


@dataclass(frozen=True)
class FpamSpec:
    """Fabric pneumatic artificial muscle baseline (ideal McKibben form).

    a_coeff and b_coeff are the empirical braid constants; the free
    contraction strain is 1 - sqrt(b/a).
    """

    muscle_radius: float = 0.004  # m
    a_coeff: float = 3.0
    b_coeff: float = 1.0
    muscle_pressure: float = 60e3  # Pa

    @property
    def free_strain(self) -> float:
        return 1.0 - math.sqrt(self.b_coeff / self.a_coeff)


def tube_wall_area(radius: float, thickness: float) -> float:
    """Full tube-wall cross section 2*pi*r*t."""
    return 2.0 * math.pi * radius * thickness


def validate_skin(skin: SkinMaterial) -> SkinMaterial:
    if skin.axial_modulus_soft <= 0:
        raise SpecValidationError("axial_modulus_soft must be positive")
    if skin.axial_modulus_taut < skin.axial_modulus_soft:
        raise SpecValidationError("axial_modulus_taut must be >= axial_modulus_soft")
    if skin.circ_modulus < 20.0 * skin.axial_modulus_soft:
        raise SpecValidationError(
            "circ_modulus must be at least 20x axial_modulus_soft "
            f"(ratio {skin.anisotropy_ratio:.1f})"
        )
    if skin.wrinkle_strain <= 0:
        raise SpecValidationError("wrinkle_strain must be positive")
    if skin.thickness <= 0:
        raise SpecValidationError("thickness must be positive")
    if skin.prestretch_coeff <= 0:
        raise SpecValidationError("prestretch_coeff must be positive")
    return skin


def validate_jamming(unit: JammingUnit) -> JammingUnit:
    if unit.k_theta <= 0:
        raise SpecValidationError("k_theta must be positive")
    if unit.mu < 0:
        raise SpecValidationError("mu must be non-negative")
    if unit.overlap_length <= 0:
        raise SpecValidationError("overlap_length must be positive")
    return unit


def validate_fpam(fpam: FpamSpec) -> FpamSpec:
    if fpam.muscle_radius <= 0:
        raise SpecValidationError("muscle_radius must be positive")
    if not (fpam.a_coeff > fpam.b_coeff > 0):
        raise SpecValidationError("fpam coefficients must satisfy a > b > 0")
    return fpam


def validate_spec(spec: RobotSpec) -> RobotSpec:
    """Check every RobotSpec invariant; fill film_area when absent.

    Returns the (possibly completed) spec. Idempotent: validating an
    already-validated spec returns it unchanged.
    """
    if spec.radius <= 0:
        raise SpecValidationError("radius must be positive")
    if not spec.segments:
        raise SpecValidationError("robot needs at least one segment")
    for i, seg in enumerate(spec.segments):
        if seg.rest_length <= 0:
            raise SpecValidationError(f"segment {i} rest_length must be positive")
    validate_skin(spec.skin)
    validate_jamming(spec.jamming)
    if spec.film_area is None:
        return replace(spec, film_area=tube_wall_area(spec.radius, spec.skin.thickness))
    if spec.film_area <= 0:
        raise SpecValidationError("film_area must be positive")
    return spec


def default_robot_spec(
    n_segments: int = DEFAULT_SEGMENT_COUNT,
    segment_length: float = DEFAULT_SEGMENT_LENGTH,
    radius: float = DEFAULT_RADIUS,
    skin: Optional[SkinMaterial] = None,
    jamming: Optional[JammingUnit] = None,
) -> RobotSpec:
    """Paper-default robot: 32 mm diameter, identical serial segments."""
    return validate_spec(
        RobotSpec(
            radius=radius,
            segments=tuple(SegmentSpec(rest_length=segment_length) for _ in range(n_segments)),
            skin=skin or SkinMaterial(),
            jamming=jamming or JammingUnit(),
        )
    )
