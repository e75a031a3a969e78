"""Scenario files, wire payloads, and event-log serialization.

Scenario JSON uses operator units (kPa, mm, grams, degrees); everything
is converted to SI at this boundary. Schema violations raise
ScenarioError carrying the JSON path of the offending key.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Optional, Sequence

from .core import (
    JammingUnit,
    JamState,
    RobotSpec,
    SegmentSpec,
    Side,
    SkinMaterial,
    validate_spec,
)
from .growsim import (
    Command,
    Environment,
    Event,
    Gap,
    Grow,
    MassObject,
    Retract,
    SetJam,
    SetPressure,
    SimConfig,
    SimState,
    Simulation,
    segment_centerline_length,
    validate_environment,
)
from .kinematics import backbone_polyline, tip_pose

SNAPSHOT_POLYLINE_DEV = 5e-4  # m, backbone sampling for emitted snapshots


class ScenarioError(ValueError):
    """Scenario schema violation; `path` points at the offending key."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Scenario:
    spec: RobotSpec
    env: Environment
    script: tuple = ()
    config: SimConfig = field(default_factory=SimConfig)
    name: str = ""

    def build_sim(self) -> Simulation:
        return Simulation(self.spec, self.env, self.config)


def _expect(d: Any, typ, path: str):
    if not isinstance(d, typ):
        names = typ.__name__ if isinstance(typ, type) else "/".join(t.__name__ for t in typ)
        raise ScenarioError(path, f"expected {names}, got {type(d).__name__}")
    return d


def _number(d: Any, path: str) -> float:
    if isinstance(d, bool) or not isinstance(d, (int, float)):
        raise ScenarioError(path, f"expected number, got {type(d).__name__}")
    return float(d)


def _point_mm(d: Any, path: str):
    _expect(d, list, path)
    if len(d) != 2:
        raise ScenarioError(path, "expected [x_mm, y_mm]")
    return (_number(d[0], f"{path}[0]") * 1e-3, _number(d[1], f"{path}[1]") * 1e-3)


def _side(value: Any, path: str) -> Side:
    if value not in ("left", "right"):
        raise ScenarioError(path, f"side must be 'left' or 'right', got {value!r}")
    return Side(value)


def material_from_dict(d: Dict[str, Any], path: str = "robot.material") -> SkinMaterial:
    _expect(d, dict, path)
    base = SkinMaterial()
    kw: Dict[str, float] = {}
    if "axial_modulus_soft_mpa" in d:
        kw["axial_modulus_soft"] = _number(d["axial_modulus_soft_mpa"], f"{path}.axial_modulus_soft_mpa") * 1e6
    if "axial_modulus_taut_mpa" in d:
        kw["axial_modulus_taut"] = _number(d["axial_modulus_taut_mpa"], f"{path}.axial_modulus_taut_mpa") * 1e6
    if "circ_modulus_mpa" in d:
        kw["circ_modulus"] = _number(d["circ_modulus_mpa"], f"{path}.circ_modulus_mpa") * 1e6
    if "wrinkle_strain" in d:
        kw["wrinkle_strain"] = _number(d["wrinkle_strain"], f"{path}.wrinkle_strain")
    if "thickness_um" in d:
        kw["thickness"] = _number(d["thickness_um"], f"{path}.thickness_um") * 1e-6
    if "prestretch_coeff" in d:
        kw["prestretch_coeff"] = _number(d["prestretch_coeff"], f"{path}.prestretch_coeff")
    from dataclasses import replace

    return replace(base, **kw)


def robot_from_dict(d: Dict[str, Any], path: str = "robot") -> RobotSpec:
    _expect(d, dict, path)
    if "radius_mm" not in d:
        raise ScenarioError(f"{path}.radius_mm", "required")
    radius = _number(d["radius_mm"], f"{path}.radius_mm") * 1e-3
    segs = _expect(d.get("segments"), list, f"{path}.segments")
    segments = []
    for i, seg in enumerate(segs):
        _expect(seg, dict, f"{path}.segments[{i}]")
        if "length_mm" not in seg:
            raise ScenarioError(f"{path}.segments[{i}].length_mm", "required")
        segments.append(SegmentSpec(rest_length=_number(seg["length_mm"], f"{path}.segments[{i}].length_mm") * 1e-3))
    skin = material_from_dict(d["material"], f"{path}.material") if "material" in d else SkinMaterial()
    jamming = JammingUnit()
    if "jamming" in d:
        j = _expect(d["jamming"], dict, f"{path}.jamming")
        jamming = JammingUnit(
            k_theta=_number(j.get("k_n", jamming.k_theta), f"{path}.jamming.k_n"),
            mu=_number(j.get("mu", jamming.mu), f"{path}.jamming.mu"),
        )
    film_area = None
    if "film_area_mm2" in d:
        film_area = _number(d["film_area_mm2"], f"{path}.film_area_mm2") * 1e-6
    try:
        return validate_spec(
            RobotSpec(radius=radius, segments=tuple(segments), skin=skin, jamming=jamming, film_area=film_area)
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from exc


def environment_from_dict(d: Optional[Dict[str, Any]], path: str = "environment") -> Environment:
    if d is None:
        return Environment()
    _expect(d, dict, path)
    obstacles = []
    for i, poly in enumerate(d.get("obstacles", [])):
        _expect(poly, list, f"{path}.obstacles[{i}]")
        obstacles.append(tuple(_point_mm(p, f"{path}.obstacles[{i}][{j}]") for j, p in enumerate(poly)))
    gaps = []
    for i, g in enumerate(d.get("gaps", [])):
        _expect(g, dict, f"{path}.gaps[{i}]")
        for key in ("p1_mm", "p2_mm", "width_mm"):
            if key not in g:
                raise ScenarioError(f"{path}.gaps[{i}].{key}", "required")
        gaps.append(
            Gap(
                p1=_point_mm(g["p1_mm"], f"{path}.gaps[{i}].p1_mm"),
                p2=_point_mm(g["p2_mm"], f"{path}.gaps[{i}].p2_mm"),
                width=_number(g["width_mm"], f"{path}.gaps[{i}].width_mm") * 1e-3,
            )
        )
    masses = []
    for i, m in enumerate(d.get("masses", [])):
        _expect(m, dict, f"{path}.masses[{i}]")
        for key in ("position_mm", "mass_g", "friction_coeff"):
            if key not in m:
                raise ScenarioError(f"{path}.masses[{i}].{key}", "required")
        masses.append(
            MassObject(
                position=_point_mm(m["position_mm"], f"{path}.masses[{i}].position_mm"),
                mass=_number(m["mass_g"], f"{path}.masses[{i}].mass_g") * 1e-3,
                friction_coeff=_number(m["friction_coeff"], f"{path}.masses[{i}].friction_coeff"),
            )
        )
    targets = tuple(_point_mm(t, f"{path}.targets[{i}]") for i, t in enumerate(d.get("targets", [])))
    try:
        return validate_environment(
            Environment(obstacles=tuple(obstacles), gaps=tuple(gaps), masses=tuple(masses), targets=targets)
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from exc


def command_from_dict(d: Dict[str, Any], path: str = "script") -> Command:
    _expect(d, dict, path)
    kind = d.get("cmd")
    if kind == "set_pressure":
        if "kpa" not in d:
            raise ScenarioError(f"{path}.kpa", "required")
        return SetPressure(pressure=_number(d["kpa"], f"{path}.kpa") * 1e3)
    if kind == "set_jam":
        for key in ("segment", "side", "state"):
            if key not in d:
                raise ScenarioError(f"{path}.{key}", "required")
        # Scenario files say jammed/released; the wire schema says jam/release.
        state_names = {"jammed": JamState.JAMMED, "jam": JamState.JAMMED,
                       "released": JamState.RELEASED, "release": JamState.RELEASED}
        if d["state"] not in state_names:
            raise ScenarioError(f"{path}.state", f"state must be one of {sorted(state_names)}, got {d['state']!r}")
        seg = d["segment"]
        if isinstance(seg, bool) or not isinstance(seg, int):
            raise ScenarioError(f"{path}.segment", "expected integer")
        return SetJam(segment=seg, side=_side(d["side"], f"{path}.side"), state=state_names[d["state"]])
    if kind == "grow":
        if "mm" not in d:
            raise ScenarioError(f"{path}.mm", "required")
        return Grow(length=_number(d["mm"], f"{path}.mm") * 1e-3)
    if kind == "retract":
        if "mm" not in d:
            raise ScenarioError(f"{path}.mm", "required")
        return Retract(length=_number(d["mm"], f"{path}.mm") * 1e-3)
    raise ScenarioError(f"{path}.cmd", f"unknown command {kind!r}")


def config_from_dict(d: Optional[Dict[str, Any]], path: str = "config") -> SimConfig:
    if d is None:
        return SimConfig()
    _expect(d, dict, path)
    kw: Dict[str, Any] = {}
    if "squeeze_ratio" in d:
        kw["squeeze_ratio"] = _number(d["squeeze_ratio"], f"{path}.squeeze_ratio")
    if "target_radius_mm" in d:
        kw["target_radius"] = _number(d["target_radius_mm"], f"{path}.target_radius_mm") * 1e-3
    if "contact_tol_mm" in d:
        kw["contact_tol"] = _number(d["contact_tol_mm"], f"{path}.contact_tol_mm") * 1e-3
    if "incidence_threshold_deg" in d:
        kw["incidence_threshold"] = math.radians(_number(d["incidence_threshold_deg"], f"{path}.incidence_threshold_deg"))
    if "grow_substep_mm" in d:
        kw["grow_substep"] = _number(d["grow_substep_mm"], f"{path}.grow_substep_mm") * 1e-3
    return SimConfig(**kw)


def scenario_from_dict(d: Dict[str, Any]) -> Scenario:
    _expect(d, dict, "$")
    if "robot" not in d:
        raise ScenarioError("robot", "required")
    spec = robot_from_dict(d["robot"])
    env = environment_from_dict(d.get("environment"))
    script = tuple(
        command_from_dict(c, f"script[{i}]") for i, c in enumerate(_expect(d.get("script", []), list, "script"))
    )
    config = config_from_dict(d.get("config"))
    return Scenario(spec=spec, env=env, script=script, config=config, name=str(d.get("name", "")))


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError("$", f"invalid JSON: {exc}") from exc
    return scenario_from_dict(data)


def bundled_scenario_names() -> List[str]:
    files = resources.files("vinesim") / "scenarios"
    return sorted(p.name[: -len(".json")] for p in files.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> Scenario:
    files = resources.files("vinesim") / "scenarios"
    candidate = files / f"{name}.json"
    if not candidate.is_file():
        raise ScenarioError("name", f"unknown bundled scenario {name!r}")
    scenario = scenario_from_dict(json.loads(candidate.read_text(encoding="utf-8")))
    if not scenario.name:
        from dataclasses import replace

        scenario = replace(scenario, name=name)
    return scenario


# -- emitted artifacts --------------------------------------------------------


def event_log_lines(events: Sequence[Event]) -> List[str]:
    """Line-delimited `tick,event,detail` records; details never contain commas."""
    return [f"{e.tick},{e.name},{e.detail}" for e in events]


def snapshot_dict(spec: RobotSpec, state: SimState, events: Sequence[Event] = ()) -> Dict[str, Any]:
    """Wire snapshot of one sim state (mm / kPa / deg at the boundary).

    tip_force_n reports the axial pushing capability P*pi*r^2 of the
    pressurized tip.
    """
    backbone = [
        [p[0] * 1e3, p[1] * 1e3]
        for p in backbone_polyline(state.chain, spec.radius, SNAPSHOT_POLYLINE_DEV)
    ]
    tip = tip_pose(state.chain, spec.radius)
    segments = []
    for i, (seg_spec, st) in enumerate(zip(spec.segments, state.robot.segment_states)):
        if st.bend_side is not None and st.strain > 0:
            r_mm = 2.0 * spec.radius / st.strain * 1e3
            theta_deg = math.degrees(st.strain * seg_spec.rest_length / (2.0 * spec.radius))
        else:
            r_mm = None
            theta_deg = 0.0
        segments.append(
            {
                "left": st.jam_left.value,
                "right": st.jam_right.value,
                "strain": st.strain,
                "R_mm": r_mm,
                "theta_deg": theta_deg,
                "length_mm": segment_centerline_length(spec, i, st) * 1e3,
            }
        )
    return {
        "tick": state.tick,
        "backbone": backbone,
        "pressure_kpa": state.robot.body_pressure / 1e3,
        "everted_mm": state.robot.everted_length * 1e3,
        "tip_mm": {"x": tip.x * 1e3, "y": tip.y * 1e3, "heading_deg": math.degrees(tip.heading)},
        "segments": segments,
        "tip_force_n": state.robot.body_pressure * math.pi * spec.radius**2,
        "events": [{"tick": e.tick, "event": e.name, "detail": e.detail} for e in events],
    }


def environment_dict(env: Environment) -> Dict[str, Any]:
    """Environment in wire units for UIs and snapshot files."""
    return {
        "obstacles": [[[p[0] * 1e3, p[1] * 1e3] for p in poly] for poly in env.obstacles],
        "gaps": [
            {
                "p1_mm": [g.p1[0] * 1e3, g.p1[1] * 1e3],
                "p2_mm": [g.p2[0] * 1e3, g.p2[1] * 1e3],
                "width_mm": g.width * 1e3,
            }
            for g in env.gaps
        ],
        "masses": [
            {
                "position_mm": [m.position[0] * 1e3, m.position[1] * 1e3],
                "mass_g": m.mass * 1e3,
                "friction_coeff": m.friction_coeff,
            }
            for m in env.masses
        ],
        "targets": [[t[0] * 1e3, t[1] * 1e3] for t in env.targets],
    }
