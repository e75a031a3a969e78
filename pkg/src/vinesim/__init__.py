"""Vine-robot modeling toolkit: statics, growth simulation, steering."""

from .core import (
    Arc,
    ArcChain,
    FpamSpec,
    JammingUnit,
    JamState,
    Pose,
    RobotSpec,
    RobotState,
    SegmentSpec,
    SegmentState,
    Side,
    SkinMaterial,
    SpecValidationError,
    default_robot_spec,
    validate_spec,
)
from .growsim import (
    Environment,
    Gap,
    Grow,
    MassObject,
    Retract,
    SetJam,
    SetPressure,
    SimConfig,
    Simulation,
    SimState,
    can_push,
    gap_passable,
)
from .planner import Plan, plan_to_target, reachable_set
from .statics import (
    EquilibriumSolution,
    curvature_sweep,
    elongation_strain,
    solve_bend_equilibrium,
    tip_force_fpam,
    tip_force_lengthening,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ArcChain",
    "Environment",
    "EquilibriumSolution",
    "FpamSpec",
    "Gap",
    "Grow",
    "JamState",
    "JammingUnit",
    "MassObject",
    "Plan",
    "Pose",
    "Retract",
    "RobotSpec",
    "RobotState",
    "SegmentSpec",
    "SegmentState",
    "SetJam",
    "SetPressure",
    "Side",
    "SimConfig",
    "SimState",
    "Simulation",
    "SkinMaterial",
    "SpecValidationError",
    "can_push",
    "curvature_sweep",
    "default_robot_spec",
    "elongation_strain",
    "gap_passable",
    "plan_to_target",
    "reachable_set",
    "solve_bend_equilibrium",
    "tip_force_fpam",
    "tip_force_lengthening",
    "validate_spec",
    "__version__",
]
