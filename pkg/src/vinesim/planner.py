"""Inverse steering: search jam assignments and pressure for a target tip.

The device has one body plenum, so a plan is a per-segment side
assignment plus a single shared pressure. Assignments are enumerated
exhaustively (3^n, capped at 8 segments) over a pressure grid, then the
pressure of the best assignment is refined by golden-section search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import geometry as geom
from .core import ArcChain, Pose, RobotSpec, Side
from .growsim import Environment, SimConfig, collide
from .kinematics import Arc, tip_pose
from .statics import elongation_strain, solve_bend_equilibrium

MAX_SEGMENTS = 8
# Assignment canonical order; also the lexicographic tie-break order.
SIDE_CHOICES: Tuple[Optional[Side], ...] = (None, Side.LEFT, Side.RIGHT)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class PlannerError(ValueError):
    pass


@dataclass(frozen=True)
class Plan:
    assignment: tuple  # per-segment Side or None
    pressure: float  # Pa
    predicted_tip: Pose
    cost: float  # m, tip-to-target distance

    @property
    def jammed_count(self) -> int:
        return sum(1 for s in self.assignment if s is not None)


def chain_for_assignment(
    spec: RobotSpec, assignment: Sequence[Optional[Side]], pressure: float, base_pose: Pose = Pose()
) -> ArcChain:
    """Fully-everted backbone for a side assignment at one body pressure."""
    arcs = []
    for seg, side in zip(spec.segments, assignment):
        if side is None:
            strain = elongation_strain(spec, pressure)
            arcs.append(Arc.straight(seg.rest_length * (1.0 + strain)))
            continue
        sol = solve_bend_equilibrium(spec, seg, pressure, side)
        if sol.below_breakaway:
            arcs.append(Arc.straight(seg.rest_length))
        else:
            arcs.append(Arc.bent(sol.inner_radius, sol.bend_angle, side))
    return ArcChain(arcs=tuple(arcs), base_pose=base_pose)


def _tip_for(spec, assignment, pressure, base_pose) -> Pose:
    return tip_pose(chain_for_assignment(spec, assignment, pressure, base_pose), spec.radius)


def plan_to_target(
    spec: RobotSpec,
    target: Tuple[float, float],
    pressure_grid: Sequence[float],
    tolerance: float,
    base_pose: Pose = Pose(),
    refine: bool = True,
    collision_env: Optional[Environment] = None,
    sim_config: SimConfig = SimConfig(),
) -> Optional[Plan]:
    """Minimum-cost plan over all assignments and grid pressures, or None.

    Exact on the grid: the returned cost is never above any enumerated
    (assignment, pressure) pair, and golden-section refinement of the best
    assignment's pressure is kept only when it strictly improves. Ties
    break toward fewer jammed segments, then lexicographic assignment
    order, independent of evaluation order. With a collision environment,
    assignments whose backbone would penetrate an obstacle are filtered
    out after costing.
    """
    if not pressure_grid:
        raise PlannerError("pressure_grid must be non-empty")
    if list(pressure_grid) != sorted(pressure_grid):
        raise PlannerError("pressure_grid must be ascending")
    if tolerance <= 0:
        raise PlannerError("tolerance must be positive")
    n = len(spec.segments)
    if n > MAX_SEGMENTS:
        raise PlannerError(f"enumeration capped at {MAX_SEGMENTS} segments, got {n}")

    best: Optional[Tuple[float, int, int, float, Pose, tuple]] = None
    for idx, assignment in enumerate(itertools.product(SIDE_CHOICES, repeat=n)):
        if collision_env is not None:
            chain = chain_for_assignment(spec, assignment, pressure_grid[0], base_pose)
        for p in pressure_grid:
            if collision_env is not None:
                chain = chain_for_assignment(spec, assignment, p, base_pose)
                if collide(chain, spec, collision_env, sim_config):
                    continue
                tip = tip_pose(chain, spec.radius)
            else:
                tip = _tip_for(spec, assignment, p, base_pose)
            cost = geom.norm(geom.sub(tip.position, target))
            jammed = sum(1 for s in assignment if s is not None)
            key = (cost, jammed, idx, p)
            if best is None or key[:3] < best[:3]:
                best = (cost, jammed, idx, p, tip, assignment)

    if best is None:
        return None
    cost, _, _, pressure, tip, assignment = best

    if refine and len(pressure_grid) > 1:
        refined_p, refined_tip, refined_cost = _golden_refine(
            spec, assignment, target, pressure_grid[0], pressure_grid[-1], base_pose
        )
        acceptable = collision_env is None or not collide(
            chain_for_assignment(spec, assignment, refined_p, base_pose),
            spec,
            collision_env,
            sim_config,
        )
        if refined_cost < cost and acceptable:
            pressure, tip, cost = refined_p, refined_tip, refined_cost

    if cost > tolerance:
        return None
    return Plan(assignment=assignment, pressure=pressure, predicted_tip=tip, cost=cost)


def _golden_refine(spec, assignment, target, p_lo, p_hi, base_pose, tol=1.0):
    def cost_at(p: float) -> float:
        tip = _tip_for(spec, assignment, p, base_pose)
        return geom.norm(geom.sub(tip.position, target))

    a, b = p_lo, p_hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = cost_at(c), cost_at(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = cost_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = cost_at(d)
    p = c if fc < fd else d
    tip = _tip_for(spec, assignment, p, base_pose)
    return p, tip, geom.norm(geom.sub(tip.position, target))


def evaluate_frontier(
    spec: RobotSpec,
    target: Tuple[float, float],
    pressure_grid: Sequence[float],
    base_pose: Pose = Pose(),
) -> List[Tuple[tuple, float, float]]:
    """Every (assignment, pressure, cost) candidate, in enumeration order."""
    n = len(spec.segments)
    if n > MAX_SEGMENTS:
        raise PlannerError(f"enumeration capped at {MAX_SEGMENTS} segments, got {n}")
    out = []
    for assignment in itertools.product(SIDE_CHOICES, repeat=n):
        for p in pressure_grid:
            tip = _tip_for(spec, assignment, p, base_pose)
            out.append((assignment, p, geom.norm(geom.sub(tip.position, target))))
    return out


def reachable_set(
    spec: RobotSpec,
    pressure_grid: Sequence[float],
    sampling: int,
    base_pose: Pose = Pose(),
) -> List[Tuple[float, float]]:
    """Tip positions over every assignment and sampled pressure.

    Pressures are `sampling` points spanning the grid's range; output
    order is (assignment lexicographic, pressure ascending), so repeated
    calls are identical.
    """
    if sampling <= 0:
        raise PlannerError("sampling must be positive")
    if not pressure_grid:
        raise PlannerError("pressure_grid must be non-empty")
    n = len(spec.segments)
    if n > MAX_SEGMENTS:
        raise PlannerError(f"enumeration capped at {MAX_SEGMENTS} segments, got {n}")
    p_lo, p_hi = min(pressure_grid), max(pressure_grid)
    if sampling == 1 or p_hi == p_lo:
        pressures = [p_lo]
    else:
        step = (p_hi - p_lo) / (sampling - 1)
        pressures = [p_lo + i * step for i in range(sampling)]
    points: List[Tuple[float, float]] = []
    for assignment in itertools.product(SIDE_CHOICES, repeat=n):
        for p in pressures:
            tip = _tip_for(spec, assignment, p, base_pose)
            points.append(tip.position)
    return points


def mirror_assignment(assignment: Sequence[Optional[Side]]) -> tuple:
    return tuple(None if s is None else s.opposite for s in assignment)
