"""Quasi-static growth simulation through a planar obstacle environment.

The robot everts from its tip: commands set body pressure, flip per-side
brakes, and grow or retract material. Every command fully re-equilibrates
the shape (no dynamics): a segment with one side locked bends toward it,
a segment with both sides released elongates straight, and a segment with
both sides locked holds whatever shape it last had. Material that has
everted keeps its segment's shape until that segment's state changes.

Contact model: growth that would drive the tip head-on into a surface is
blocked; oblique contact deflects the tip along the wall through a tight
transition arc (no friction solver). Backbone penetration beyond the
contact tolerance is never allowed; passable gaps are exempt so the body
may squeeze through openings narrower than its diameter.

Everted length is tracked in integer nanometers so command replays and
grow/retract round-trips are exact, byte-for-byte reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

from . import geometry as geom
from .core import (
    GRAVITY,
    ArcChain,
    JamState,
    Pose,
    RobotSpec,
    RobotState,
    SegmentState,
    Side,
    SpecValidationError,
)
from .kinematics import Arc, tip_pose, truncate_chain, backbone_polyline
from .statics import elongation_strain, solve_bend_equilibrium

NM = 1e-9


def _to_nm(length_m: float) -> int:
    return round(length_m / NM)


class CommandError(ValueError):
    """Command references a segment or value the robot does not have."""


@dataclass(frozen=True)
class Gap:
    """A passable opening: endpoints of the opening segment and its width."""

    p1: Tuple[float, float]
    p2: Tuple[float, float]
    width: float  # m


@dataclass(frozen=True)
class MassObject:
    position: Tuple[float, float]
    mass: float  # kg
    friction_coeff: float
    pushed: bool = False


@dataclass(frozen=True)
class Environment:
    obstacles: tuple = ()  # tuple of convex polygons (tuples of (x, y) m)
    gaps: tuple = ()
    masses: tuple = ()
    targets: tuple = ()  # points (m)


def validate_environment(env: Environment) -> Environment:
    for i, poly in enumerate(env.obstacles):
        if len(poly) < 3 or not geom.is_convex(poly):
            raise SpecValidationError(f"obstacle {i} must be a convex polygon")
    for i, gap in enumerate(env.gaps):
        if gap.width <= 0:
            raise SpecValidationError(f"gap {i} width must be positive")
    for i, m in enumerate(env.masses):
        if m.mass <= 0:
            raise SpecValidationError(f"mass {i} must be positive")
        if m.friction_coeff < 0:
            raise SpecValidationError(f"mass {i} friction_coeff must be non-negative")
    return env


@dataclass(frozen=True)
class SimConfig:
    contact_tol: float = 1e-4  # m, allowed penetration
    incidence_threshold: float = math.radians(15.0)  # head-on vs oblique
    squeeze_ratio: float = 0.75  # gap passability: width >= ratio * diameter
    target_radius: float = 0.01  # m
    grow_substep: float = 1e-3  # m
    collide_sample_dev: float = 1e-4  # m, backbone sampling tolerance
    deflect_inner_radius: float = 1e-3  # m, wall-following kinks turn almost on the spot
    max_deflections_per_grow: int = 32
    mass_clearance: float = 0.01  # m, how far a pushed mass is displaced


@dataclass(frozen=True)
class Event:
    tick: int
    name: str
    detail: str


@dataclass(frozen=True)
class Contact:
    point: Tuple[float, float]
    obstacle_index: int
    depth: float  # m of wall penetration beyond clearance


@dataclass(frozen=True)
class Deflection:
    """Contact-induced kink: a tight arc spliced in at a centerline coord."""

    s_nm: int
    side: Side
    angle: float  # rad
    length_nm: int


@dataclass(frozen=True)
class SetPressure:
    pressure: float  # Pa


@dataclass(frozen=True)
class SetJam:
    segment: int
    side: Side
    state: JamState


@dataclass(frozen=True)
class Grow:
    length: float  # m


@dataclass(frozen=True)
class Retract:
    length: float  # m


Command = Union[SetPressure, SetJam, Grow, Retract]


@dataclass(frozen=True)
class SimState:
    robot: RobotState
    chain: ArcChain
    contacts: tuple = ()
    events: tuple = ()
    masses: tuple = ()
    tick: int = 0
    everted_nm: int = 0
    deflections: tuple = ()
    gaps_passed: tuple = ()
    targets_reached: tuple = ()

    def events_at(self, tick: int) -> Tuple[Event, ...]:
        return tuple(e for e in self.events if e.tick == tick)


def gap_passable(spec: RobotSpec, gap_width: float, squeeze_ratio: float) -> bool:
    """Whether the body can squeeze through an opening of the given width."""
    if gap_width <= 0:
        raise ValueError("gap_width must be positive")
    if not 0.0 < squeeze_ratio <= 1.0:
        raise ValueError("squeeze_ratio must be in (0, 1]")
    return gap_width >= squeeze_ratio * spec.diameter


def can_push(spec: RobotSpec, pressure: float, mass: float, friction_coeff: float) -> bool:
    """Whether the axial tip force P*pi*r^2 overcomes a mass's friction."""
    if pressure < 0 or mass < 0 or friction_coeff < 0:
        raise ValueError("arguments must be non-negative")
    return pressure * math.pi * spec.radius**2 >= friction_coeff * mass * GRAVITY


def equilibrate_segment(
    spec: RobotSpec, index: int, state: SegmentState, pressure: float
) -> SegmentState:
    """Re-settle one segment under the current pressure and brake states.

    Both brakes released: straight elongation. Exactly one locked: bend
    equilibrium toward the locked side. Both locked: the shape is held
    (strain and bend side frozen).
    """
    jammed = state.jammed_sides
    if len(jammed) == 2:
        return state
    if len(jammed) == 1:
        side = jammed[0]
        sol = solve_bend_equilibrium(spec, spec.segments[index], pressure, side)
        return replace(state, strain=sol.strain, bend_side=side)
    return replace(state, strain=elongation_strain(spec, pressure), bend_side=None)


def segment_centerline_length(spec: RobotSpec, index: int, state: SegmentState) -> float:
    """Current centerline length: l0*(1+eps) straight, l0*(1+eps/2) bent."""
    l0 = spec.segments[index].rest_length
    if state.bend_side is None or state.strain <= 0.0:
        return l0 * (1.0 + state.strain)
    return l0 * (1.0 + state.strain / 2.0)


def segment_arc(spec: RobotSpec, index: int, state: SegmentState) -> Arc:
    l0 = spec.segments[index].rest_length
    if state.bend_side is None or state.strain <= 0.0:
        return Arc.straight(l0 * (1.0 + state.strain))
    inner = 2.0 * spec.radius / state.strain
    angle = state.strain * l0 / (2.0 * spec.radius)
    return Arc.bent(inner, angle, state.bend_side)


def total_capacity(spec: RobotSpec, seg_states: Sequence[SegmentState]) -> float:
    return sum(segment_centerline_length(spec, i, st) for i, st in enumerate(seg_states))


def build_full_chain(
    spec: RobotSpec,
    seg_states: Sequence[SegmentState],
    deflections: Sequence[Deflection],
    base_pose: Pose,
    config: SimConfig,
) -> ArcChain:
    """Realized geometry of the whole robot, deflection kinks spliced in.

    Each kink occupies part of its segment's centerline budget, so the
    total length always equals the sum of segment lengths regardless of
    contact history.
    """
    arcs: List[Arc] = []
    pending = sorted(deflections, key=lambda d: d.s_nm)
    di = 0
    s = 0.0
    for i, st in enumerate(seg_states):
        seg_len = segment_centerline_length(spec, i, st)
        seg_end = s + seg_len
        nominal = segment_arc(spec, i, st)
        rho = None if nominal.is_straight else nominal.inner_radius + spec.radius
        cursor = s
        while di < len(pending) and pending[di].s_nm * NM < seg_end - 1e-12:
            d = pending[di]
            d_start = d.s_nm * NM
            d_len = min(d.length_nm * NM, seg_end - d_start)
            if d_start > cursor + 1e-12:
                arcs.append(_nominal_piece(nominal, rho, d_start - cursor))
            frac = d_len / (d.length_nm * NM) if d.length_nm else 0.0
            if frac > 0.0:
                arcs.append(Arc.bent(config.deflect_inner_radius, d.angle * frac, d.side))
            cursor = d_start + d_len
            di += 1
        if seg_end > cursor + 1e-12:
            arcs.append(_nominal_piece(nominal, rho, seg_end - cursor))
        s = seg_end
    return ArcChain(arcs=tuple(arcs), base_pose=base_pose)


def _nominal_piece(nominal: Arc, rho: Optional[float], length: float) -> Arc:
    if nominal.is_straight:
        return Arc.straight(length)
    return Arc.bent(nominal.inner_radius, length / rho, nominal.side)


def _gap_zones(spec: RobotSpec, env: Environment, config: SimConfig):
    """Capsules around passable openings where wall contact is exempt."""
    zones = []
    for gi, gap in enumerate(env.gaps):
        if gap_passable(spec, gap.width, config.squeeze_ratio):
            zones.append((gi, gap.p1, gap.p2, spec.radius))
    return zones


def _in_gap_zone(point, zones) -> bool:
    return any(
        geom.point_segment_distance(point, p1, p2) <= radius for _, p1, p2, radius in zones
    )


def collide(
    chain: ArcChain,
    spec: RobotSpec,
    env: Environment,
    config: SimConfig = SimConfig(),
) -> List[Contact]:
    """Backbone samples whose wall clearance is violated, gaps exempt."""
    if not env.obstacles:
        return []
    zones = _gap_zones(spec, env, config)
    contacts: List[Contact] = []
    points = backbone_polyline(chain, spec.radius, config.collide_sample_dev)
    for p in points:
        for oi, poly in enumerate(env.obstacles):
            d = geom.signed_distance_to_polygon(p, poly)
            depth = spec.radius - d
            if depth > config.contact_tol and not _in_gap_zone(p, zones):
                contacts.append(Contact(point=p, obstacle_index=oi, depth=depth))
    return contacts


class Simulation:
    """Single-owner command-driven growth simulation.

    Immutable SimState snapshots may be shared freely; `step` applies one
    command and returns (and stores) the next state. Identical command
    sequences always produce identical states and event logs.
    """

    def __init__(
        self,
        spec: RobotSpec,
        env: Environment = Environment(),
        config: SimConfig = SimConfig(),
        base_pose: Pose = Pose(),
    ):
        from .core import validate_spec

        self.spec = validate_spec(spec)
        self.env = validate_environment(env)
        self.config = config
        self.base_pose = base_pose
        self.state = self.initial_state()

    def initial_state(self) -> SimState:
        seg_states = tuple(SegmentState() for _ in self.spec.segments)
        robot = RobotState(body_pressure=0.0, segment_states=seg_states, everted_length=0.0)
        chain = ArcChain(arcs=(), base_pose=self.base_pose)
        return SimState(
            robot=robot,
            chain=chain,
            masses=self.env.masses,
            gaps_passed=tuple(False for _ in self.env.gaps),
            targets_reached=tuple(False for _ in self.env.targets),
        )

    def reset(self) -> SimState:
        """Back to the scenario's initial robot state.

        The tick keeps counting and the append-only event log is kept;
        only the robot, masses, and progress flags return to scenario
        initial.
        """
        fresh = self.initial_state()
        self.state = replace(fresh, tick=self.state.tick + 1, events=self.state.events)
        return self.state

    # -- command application ------------------------------------------------

    def step(self, command: Command) -> SimState:
        if isinstance(command, SetPressure):
            new = self._apply_reshape(pressure=command.pressure)
        elif isinstance(command, SetJam):
            new = self._apply_jam(command)
        elif isinstance(command, Grow):
            new = self._apply_grow(command.length)
        elif isinstance(command, Retract):
            new = self._apply_retract(command.length)
        else:
            raise CommandError(f"unknown command {command!r}")
        self.state = new
        return new

    def apply_script(self, commands: Sequence[Command]) -> SimState:
        for cmd in commands:
            self.step(cmd)
        return self.state

    # -- geometry under the current state ------------------------------------

    def _realized_chain(self, state: SimState, everted_nm: int) -> ArcChain:
        full = build_full_chain(
            self.spec, state.robot.segment_states, state.deflections, self.base_pose, self.config
        )
        return truncate_chain(full, self.spec.radius, everted_nm * NM)

    def _finish(self, state: SimState, events: List[Event]) -> SimState:
        chain = self._realized_chain(state, state.everted_nm)
        robot = replace(state.robot, everted_length=state.everted_nm * NM)
        state = replace(state, robot=robot, chain=chain)
        state = self._check_targets(state, events)
        contacts = tuple(collide(chain, self.spec, self.env, self.config))
        return replace(state, contacts=contacts, events=state.events + tuple(events))

    def _check_targets(self, state: SimState, events: List[Event], tip: Optional[Pose] = None) -> SimState:
        if not self.env.targets:
            return state
        if tip is None:
            tip = tip_pose(state.chain, self.spec.radius)
        reached = list(state.targets_reached)
        for i, target in enumerate(self.env.targets):
            if not reached[i] and geom.norm(geom.sub(tip.position, target)) <= self.config.target_radius:
                reached[i] = True
                events.append(
                    Event(state.tick, "target-reached", f"target={i};x_mm={target[0]*1e3:.1f};y_mm={target[1]*1e3:.1f}")
                )
        return replace(state, targets_reached=tuple(reached))

    # -- reshape commands (pressure / jam) ------------------------------------

    def _apply_jam(self, cmd: SetJam) -> SimState:
        state = self.state
        if not 0 <= cmd.segment < len(self.spec.segments):
            raise CommandError(f"no such segment {cmd.segment}")
        if cmd.side not in self.spec.segments[cmd.segment].jam_sides:
            raise CommandError(f"segment {cmd.segment} has no {cmd.side.value} jamming unit")
        seg_states = list(state.robot.segment_states)
        st = seg_states[cmd.segment]
        if cmd.side is Side.LEFT:
            st = replace(st, jam_left=cmd.state)
        else:
            st = replace(st, jam_right=cmd.state)
        seg_states[cmd.segment] = st
        return self._apply_reshape(seg_states=tuple(seg_states))

    def _apply_reshape(self, pressure: Optional[float] = None, seg_states: Optional[tuple] = None) -> SimState:
        """Re-equilibrate every segment; reject shapes that would penetrate.

        Everted amounts are preserved per segment (as fractions of each
        segment's length) and contact-deflection kinks are discarded: a
        re-settled body is assumed to settle clear of prior contacts, and
        any reshape that would embed the backbone in a wall is refused.
        """
        state = self.state
        tick = state.tick + 1
        p = state.robot.body_pressure if pressure is None else pressure
        if p < 0:
            raise CommandError("pressure must be non-negative")
        old_states = state.robot.segment_states
        base_states = seg_states if seg_states is not None else old_states
        new_states = tuple(
            equilibrate_segment(self.spec, i, st, p) for i, st in enumerate(base_states)
        )

        # Rescale everted length: each segment keeps its everted fraction.
        old_lengths = [segment_centerline_length(self.spec, i, st) for i, st in enumerate(old_states)]
        new_lengths = [segment_centerline_length(self.spec, i, st) for i, st in enumerate(new_states)]
        remaining = state.everted_nm * NM
        everted = 0.0
        for old_len, new_len in zip(old_lengths, new_lengths):
            if remaining <= 0:
                break
            frac = min(1.0, remaining / old_len) if old_len > 0 else 0.0
            everted += frac * new_len
            remaining -= old_len
        everted_nm = _to_nm(everted)

        candidate = replace(
            state,
            robot=replace(state.robot, body_pressure=p, segment_states=new_states),
            deflections=(),
            everted_nm=everted_nm,
            tick=tick,
        )
        chain = self._realized_chain(candidate, everted_nm)
        events: List[Event] = []
        if collide(chain, self.spec, self.env, self.config):
            # Refuse the reshape rather than embed the body in a wall.
            blocked = replace(state, tick=tick)
            events.append(Event(tick, "blocked", "reshape-would-penetrate;state-unchanged"))
            return replace(blocked, events=blocked.events + tuple(events))
        return self._finish(candidate, events)

    # -- growth ---------------------------------------------------------------

    def _apply_grow(self, length: float) -> SimState:
        if length < 0:
            raise CommandError("grow length must be non-negative")
        state = self.state
        tick = state.tick + 1
        state = replace(state, tick=tick)
        events: List[Event] = []
        zones = _gap_zones(self.spec, self.env, self.config)
        capacity_nm = _to_nm(total_capacity(self.spec, state.robot.segment_states))
        remaining_nm = _to_nm(length)
        deflect_budget = self.config.max_deflections_per_grow
        substep_nm = max(1, _to_nm(self.config.grow_substep))

        while remaining_nm > 0:
            if state.everted_nm >= capacity_nm:
                events.append(Event(tick, "material-exhausted", "grow-clamped"))
                break
            step_nm = min(substep_nm, remaining_nm, capacity_nm - state.everted_nm)
            old_chain = self._realized_chain(state, state.everted_nm)
            old_tip = tip_pose(old_chain, self.spec.radius)
            old_pen = self._max_penetration(old_tip.position, zones)

            candidate_nm = state.everted_nm + step_nm
            new_chain = self._realized_chain(state, candidate_nm)
            new_tip = tip_pose(new_chain, self.spec.radius)

            # Oblique walls deflect the tip before it touches: the kink is
            # triggered at a standoff covering the turn arc's normal travel,
            # so the backbone never penetrates while wall-following. A tip
            # aimed through a passable opening threads it instead.
            if not self._inside_active_kink(state) and not self._aimed_through_gap(new_tip, zones):
                trigger = self._deflection_trigger(old_tip, new_tip, zones)
                if trigger is not None:
                    if deflect_budget <= 0:
                        events.append(Event(tick, "blocked", "deflection-budget-exhausted"))
                        break
                    deflect_budget -= 1
                    state = self._insert_kink(state, new_tip, trigger, events, tick)
                    continue

            hit = self._worst_obstacle(new_tip.position, zones)
            if hit is not None and hit[1] > max(self.config.contact_tol, old_pen + 1e-12):
                oi = hit[0]
                events.append(
                    Event(tick, "blocked", f"obstacle={oi};x_mm={old_tip.x*1e3:.1f};y_mm={old_tip.y*1e3:.1f}")
                )
                break

            mass_hit = self._mass_contact(state, new_tip.position)
            if mass_hit is not None:
                mi, mass = mass_hit
                if can_push(self.spec, state.robot.body_pressure, mass.mass, mass.friction_coeff):
                    state = self._push_mass(state, mi, mass, new_tip, events, tick)
                else:
                    events.append(Event(tick, "blocked", f"mass={mi};immovable"))
                    break

            state = self._cross_gaps(state, old_tip.position, new_tip.position, events, tick)
            state = replace(state, everted_nm=candidate_nm)
            state = self._check_targets(state, events, new_tip)
            remaining_nm -= step_nm

        return self._finish(state, events)

    def _apply_retract(self, length: float) -> SimState:
        if length < 0:
            raise CommandError("retract length must be non-negative")
        state = self.state
        tick = state.tick + 1
        new_nm = max(0, state.everted_nm - _to_nm(length))
        kept = tuple(d for d in state.deflections if d.s_nm < new_nm)
        state = replace(state, tick=tick, everted_nm=new_nm, deflections=kept)
        return self._finish(state, [])

    # -- contact helpers -------------------------------------------------------

    def _worst_obstacle(self, point, zones):
        """Deepest clearance violation at a point: (index, depth, normal)."""
        worst = None
        for oi, poly in enumerate(self.env.obstacles):
            d = geom.signed_distance_to_polygon(point, poly)
            depth = self.spec.radius - d
            if depth > self.config.contact_tol and not _in_gap_zone(point, zones):
                if worst is None or depth > worst[1]:
                    worst = (oi, depth, geom.outward_normal_at(point, poly))
        return worst

    def _max_penetration(self, point, zones) -> float:
        pen = 0.0
        for poly in self.env.obstacles:
            d = geom.signed_distance_to_polygon(point, poly)
            depth = self.spec.radius - d
            if depth > pen and not _in_gap_zone(point, zones):
                pen = depth
        return pen

    def _aimed_through_gap(self, tip: Pose, zones) -> bool:
        """Whether the heading ray crosses a passable opening segment."""
        heading = (math.cos(tip.heading), math.sin(tip.heading))
        for _, p1, p2, _ in zones:
            axis = geom.sub(p2, p1)
            denom = geom.cross(heading, axis)
            if abs(denom) < 1e-12:
                continue
            rel = geom.sub(p1, tip.position)
            t = geom.cross(rel, axis) / denom
            u = geom.cross(rel, heading) / denom
            if t > 0.0 and 0.0 <= u <= 1.0:
                return True
        return False

    def _inside_active_kink(self, state) -> bool:
        return any(
            d.s_nm <= state.everted_nm < d.s_nm + d.length_nm for d in state.deflections
        )

    def _deflection_trigger(self, old_tip: Pose, new_tip: Pose, zones):
        """Turn angle needed if an oblique wall is within turning standoff.

        Returns the signed heading-to-tangent angle, or None when growth
        may simply continue (clear space, receding walls, or a head-on
        approach that the hard-contact check will block on arrival).
        """
        if _in_gap_zone(new_tip.position, zones):
            return None
        heading = (math.cos(new_tip.heading), math.sin(new_tip.heading))
        kink_rho = self.config.deflect_inner_radius + self.spec.radius
        best = None
        for poly in self.env.obstacles:
            d_new = geom.signed_distance_to_polygon(new_tip.position, poly)
            d_old = geom.signed_distance_to_polygon(old_tip.position, poly)
            if d_new >= d_old:  # not approaching this wall
                continue
            normal = geom.outward_normal_at(new_tip.position, poly)
            into = (-normal[0], -normal[1])
            cos_inc = max(-1.0, min(1.0, geom.dot(heading, into)))
            if cos_inc <= 0.0:
                continue
            incidence = math.acos(cos_inc)
            if incidence <= self.config.incidence_threshold:
                continue  # head-on: let the hard check block at the wall
            tangent = (-normal[1], normal[0])
            if geom.dot(tangent, heading) < 0:
                tangent = (-tangent[0], -tangent[1])
            turn = math.atan2(geom.cross(heading, tangent), geom.dot(heading, tangent))
            if abs(turn) < 1e-9:
                continue
            standoff = kink_rho * (1.0 - math.cos(abs(turn))) + 2.0 * self.config.contact_tol
            clearance = d_new - self.spec.radius
            if clearance <= standoff and (best is None or abs(turn) > abs(best)):
                best = turn
        return best

    def _insert_kink(self, state, tip: Pose, turn: float, events, tick):
        """Splice a tight wall-following arc in at the current tip."""
        side = Side.LEFT if turn > 0 else Side.RIGHT
        kink_rho = self.config.deflect_inner_radius + self.spec.radius
        length_nm = max(1, _to_nm(kink_rho * abs(turn)))
        deflection = Deflection(
            s_nm=state.everted_nm, side=side, angle=abs(turn), length_nm=length_nm
        )
        events.append(
            Event(
                tick,
                "deflected",
                f"turn_deg={math.degrees(turn):.1f};x_mm={tip.x*1e3:.1f};y_mm={tip.y*1e3:.1f}",
            )
        )
        return replace(state, deflections=state.deflections + (deflection,))

    def _mass_contact(self, state, point):
        for mi, mass in enumerate(state.masses):
            if mass.pushed:
                continue
            if geom.norm(geom.sub(point, mass.position)) < self.spec.radius:
                return mi, mass
        return None

    def _push_mass(self, state, mi: int, mass: MassObject, tip: Pose, events, tick) -> SimState:
        heading = (math.cos(tip.heading), math.sin(tip.heading))
        offset = geom.cross(heading, geom.sub(mass.position, tip.position))
        side = 1.0 if offset >= 0 else -1.0
        normal = (-heading[1] * side, heading[0] * side)
        shift = self.spec.radius + self.config.mass_clearance
        new_pos = (mass.position[0] + normal[0] * shift, mass.position[1] + normal[1] * shift)
        masses = list(state.masses)
        masses[mi] = replace(mass, position=new_pos, pushed=True)
        events.append(
            Event(
                tick,
                "mass-pushed",
                f"mass={mi};mass_g={mass.mass*1e3:.0f};x_mm={new_pos[0]*1e3:.1f};y_mm={new_pos[1]*1e3:.1f}",
            )
        )
        return replace(state, masses=tuple(masses))

    def _cross_gaps(self, state, old_point, new_point, events, tick) -> SimState:
        if not self.env.gaps:
            return state
        passed = list(state.gaps_passed)
        for gi, gap in enumerate(self.env.gaps):
            if passed[gi]:
                continue
            if not gap_passable(self.spec, gap.width, self.config.squeeze_ratio):
                continue
            axis = geom.sub(gap.p2, gap.p1)
            before = geom.cross(axis, geom.sub(old_point, gap.p1))
            after = geom.cross(axis, geom.sub(new_point, gap.p1))
            if before == 0.0 and after == 0.0:
                continue
            if (before <= 0.0 < after) or (after <= 0.0 < before):
                denom = geom.dot(axis, axis)
                t = geom.dot(geom.sub(new_point, gap.p1), axis) / denom
                if 0.0 <= t <= 1.0:
                    passed[gi] = True
                    events.append(Event(tick, "gap-passed", f"gap={gi};width_mm={gap.width*1e3:.1f}"))
        return replace(state, gaps_passed=tuple(passed))
