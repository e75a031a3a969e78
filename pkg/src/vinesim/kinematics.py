"""Arc geometry and piecewise-constant-curvature forward kinematics.

An outer-side strain eps on a segment of rest length l bends it into a
circular arc with inner-wall radius R = 2r/eps and angle theta = eps*l/(2r):
the inner (locked) wall keeps length l = R*theta while the outer wall
stretches to l*(1+eps) = (R+2r)*theta. The centerline travels at R + r.
"""

from __future__ import annotations

import math
from typing import List, Tuple

from .core import Arc, ArcChain, Pose, Side


def bend_geometry(strain: float, radius: float, seg_length: float) -> Tuple[float, float]:
    """Inner radius and bend angle for a positive outer-side strain."""
    if strain <= 0:
        raise ValueError("bend_geometry needs a positive strain; use arc_from_strain")
    if radius <= 0 or seg_length <= 0:
        raise ValueError("radius and seg_length must be positive")
    inner_radius = 2.0 * radius / strain
    angle = strain * seg_length / (2.0 * radius)
    return inner_radius, angle


def arc_from_strain(
    strain: float, radius: float, seg_length: float, side: Side = Side.LEFT
) -> Arc:
    """Arc produced by straining one side; zero strain gives a straight arc."""
    if strain < 0:
        raise ValueError("strain must be non-negative")
    if strain == 0.0:
        return Arc.straight(seg_length)
    inner_radius, angle = bend_geometry(strain, radius, seg_length)
    return Arc.bent(inner_radius, angle, side)


def strain_from_arc(inner_radius: float, radius: float) -> float:
    """Outer-side strain of a bend with the given inner-wall radius.

    The straight limit (inner_radius -> inf) maps to zero strain.
    """
    if inner_radius <= 0:
        raise ValueError("inner_radius must be positive")
    if math.isinf(inner_radius):
        return 0.0
    return 2.0 * radius / inner_radius


def _arc_point(pose: Pose, arc: Arc, robot_radius: float, fraction: float) -> Pose:
    """Pose a fraction of the way along one arc, measured by angle/length.

    A single closed form is used for every sample so that polyline
    endpoints coincide bit-for-bit with composed arc end poses. The bend
    sign enters algebraically (sin/cos are evaluated on non-negative
    angles only), which keeps left/right mirror evaluations exactly
    symmetric.
    """
    x, y, h = pose.x, pose.y, pose.heading
    if arc.is_straight:
        t = (arc.length or 0.0) * fraction
        return Pose(x + t * math.cos(h), y + t * math.sin(h), h)
    s = arc.side.sign
    rho = arc.inner_radius + robot_radius
    phi = arc.angle * fraction
    sin_p, cos_p = math.sin(phi), math.cos(phi)
    sin_h, cos_h = math.sin(h), math.cos(h)
    return Pose(
        x + rho * sin_p * cos_h + s * rho * sin_h * (cos_p - 1.0),
        y + rho * sin_p * sin_h + s * rho * cos_h * (1.0 - cos_p),
        h + s * phi,
    )


def advance_pose(pose: Pose, arc: Arc, robot_radius: float) -> Pose:
    """End pose of one arc starting from `pose`."""
    return _arc_point(pose, arc, robot_radius, 1.0)


def forward_kinematics(chain: ArcChain, robot_radius: float) -> List[Pose]:
    """Poses along the chain: base pose first, then each arc's end pose.

    The last entry is the tip pose; an empty chain yields just the base.
    """
    poses = [chain.base_pose]
    for arc in chain.arcs:
        poses.append(advance_pose(poses[-1], arc, robot_radius))
    return poses


def tip_pose(chain: ArcChain, robot_radius: float) -> Pose:
    return forward_kinematics(chain, robot_radius)[-1]


def backbone_polyline(
    chain: ArcChain, robot_radius: float, max_seg_dev: float
) -> List[Tuple[float, float]]:
    """Centerline polyline with chordal deviation at most max_seg_dev.

    Arc endpoints appear exactly (same closed form as forward_kinematics);
    interior samples are spaced so the sagitta of each chord stays within
    tolerance.
    """
    if max_seg_dev <= 0:
        raise ValueError("max_seg_dev must be positive")
    pose = chain.base_pose
    points: List[Tuple[float, float]] = [(pose.x, pose.y)]
    for arc in chain.arcs:
        if arc.is_straight:
            n = 1
        else:
            rho = arc.inner_radius + robot_radius
            if max_seg_dev >= rho:
                step = arc.angle if arc.angle > 0 else 1.0
            else:
                step = 2.0 * math.acos(1.0 - max_seg_dev / rho)
            n = max(1, math.ceil(arc.angle / step)) if arc.angle > 0 else 1
        for k in range(1, n + 1):
            p = _arc_point(pose, arc, robot_radius, k / n)
            points.append((p.x, p.y))
        pose = advance_pose(pose, arc, robot_radius)
    return points


def pose_at_arclength(chain: ArcChain, robot_radius: float, s: float) -> Pose:
    """Pose at centerline arclength s from the base; clamps to the tip."""
    if s <= 0:
        return chain.base_pose
    pose = chain.base_pose
    remaining = s
    for arc in chain.arcs:
        seg_len = arc.centerline_length(robot_radius)
        if remaining <= seg_len or seg_len == 0.0:
            frac = 0.0 if seg_len == 0.0 else remaining / seg_len
            return _arc_point(pose, arc, robot_radius, min(1.0, frac))
        pose = advance_pose(pose, arc, robot_radius)
        remaining -= seg_len
    return pose


def truncate_chain(chain: ArcChain, robot_radius: float, s: float) -> ArcChain:
    """Prefix of the chain up to centerline arclength s (partial last arc)."""
    if s <= 0:
        return ArcChain(arcs=(), base_pose=chain.base_pose)
    arcs: List[Arc] = []
    remaining = s
    for arc in chain.arcs:
        seg_len = arc.centerline_length(robot_radius)
        if remaining >= seg_len:
            arcs.append(arc)
            remaining -= seg_len
            if remaining == 0.0:
                break
            continue
        if seg_len > 0.0:
            frac = remaining / seg_len
            if arc.is_straight:
                arcs.append(Arc.straight(arc.length * frac))
            else:
                arcs.append(Arc.bent(arc.inner_radius, arc.angle * frac, arc.side))
        break
    return ArcChain(arcs=tuple(arcs), base_pose=chain.base_pose)


def mirrored_chain(chain: ArcChain) -> ArcChain:
    """Chain with every bend side reflected; straight arcs untouched."""
    arcs = tuple(
        arc if arc.is_straight else Arc.bent(arc.inner_radius, arc.angle, arc.side.opposite)
        for arc in chain.arcs
    )
    return ArcChain(arcs=arcs, base_pose=chain.base_pose)
