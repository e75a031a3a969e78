"""Command-line surface: fit, sweep, simulate, plan, serve.

Exit codes are stable: 0 success, 2 input error, 3 no plan / target
unreached, 4 internal solver failure. Units at this boundary are kPa, mm,
grams, and degrees; conversion to SI happens in `vinesim.scenario`.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional, Sequence

from . import __version__
from .core import FpamSpec, SpecValidationError, default_robot_spec
from .growsim import CommandError, Grow, SetJam, SetPressure, Simulation
from .jamming import fit_capstan
from .material import FitError, fit_linear, fit_two_regime
from .planner import PlannerError, evaluate_frontier, plan_to_target
from .scenario import (
    Scenario,
    ScenarioError,
    environment_dict,
    event_log_lines,
    load_bundled,
    load_scenario,
    robot_from_dict,
    snapshot_dict,
)
from .statics import FPAM_BODY_PRESSURES, FpamMode, SolverError, curvature_sweep
from .tables import (
    EVENT_HEADER,
    FRONTIER_HEADER,
    SWEEP_HEADER,
    TableError,
    read_capstan_csv,
    read_prestretch_csv,
    read_stress_strain_csv,
    svg_line_chart,
    sweep_rows,
    write_csv,
    write_model_card,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_PLAN = 3
EXIT_SOLVER = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vinesim",
        description="Vine-robot statics, growth simulation, and steering toolkit.",
    )
    parser.add_argument("--version", action="version", version=f"vinesim {__version__}")
    parser.add_argument("--out", default=".", help="output directory (default: cwd)")
    parser.add_argument("--format", choices=("csv", "jsonl"), default="csv", help="event log format")
    parser.add_argument(
        "--seed", type=int, default=None,
        help="accepted for batch-harness uniformity; the toolkit is fully deterministic, so this is a no-op",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit characterization data to a model card")
    p_fit.add_argument("csv", help="input CSV path")
    p_fit.add_argument(
        "--kind", required=True, choices=("stress_strain", "capstan", "prestretch")
    )
    p_fit.set_defaults(func=cmd_fit)

    p_sweep = sub.add_parser("sweep", help="curvature vs pressure sweep")
    p_sweep.add_argument("--spec", help="robot JSON file (scenario schema); defaults to the paper robot")
    p_sweep.add_argument("--range", dest="prange", default="0:60:5", help="pressure range start:stop:step in kPa")
    p_sweep.add_argument("--mode", choices=("lengthening", "fpam"), default="lengthening")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="replay a scenario script")
    p_sim.add_argument("scenario", help="scenario JSON path, or a bundled name with --bundled")
    p_sim.add_argument("--bundled", action="store_true", help="treat the argument as a bundled scenario name")
    p_sim.set_defaults(func=cmd_simulate)

    p_plan = sub.add_parser("plan", help="search a jam/pressure plan reaching a target")
    p_plan.add_argument("scenario", help="scenario JSON path, or a bundled name with --bundled")
    p_plan.add_argument("--bundled", action="store_true")
    p_plan.add_argument("--target", required=True, help="target point x,y in mm")
    p_plan.add_argument("--grid", default="0:60:5", help="pressure grid start:stop:step in kPa")
    p_plan.add_argument("--tolerance", type=float, default=10.0, help="acceptance distance in mm")
    p_plan.add_argument("--check", action="store_true", help="roll the plan through the simulator and report collisions")
    p_plan.set_defaults(func=cmd_plan)

    p_serve = sub.add_parser("serve", help="run the interactive steering service")
    p_serve.add_argument("--port", type=int, default=None, help="default: $VINESIM_PORT or 8080")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None, help="directory with built UI assets")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def _out_path(args, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _parse_range(text: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise TableError(f"range must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise TableError(f"range values must be numbers: {text!r}") from None
    if step < 0 or stop < start:
        raise TableError(f"range must ascend: {text!r}")
    if step == 0:
        if stop != start:
            raise TableError(f"zero step needs stop == start: {text!r}")
        return [start]
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-9:
            break
        values.append(v)
        k += 1
    return values


def _load_any_scenario(args) -> Scenario:
    if args.bundled:
        return load_bundled(args.scenario)
    return load_scenario(args.scenario)


# -- fit -----------------------------------------------------------------------


def cmd_fit(args) -> int:
    if args.kind == "stress_strain":
        samples = read_stress_strain_csv(args.csv)
        from .material import Direction

        longitudinal = [s for s in samples if s.direction is Direction.LONGITUDINAL]
        transverse = [s for s in samples if s.direction is Direction.TRANSVERSE]
        fit = fit_two_regime(longitudinal)
        stresses = [s.stress for s in longitudinal]
        mean = sum(stresses) / len(stresses)
        sst = sum((y - mean) ** 2 for y in stresses)
        r2 = 1.0 if sst == 0 and fit.sse <= 1e-30 else (1.0 - fit.sse / sst if sst > 0 else 0.0)
        card = {
            "kind": "stress_strain",
            "source": os.path.basename(args.csv),
            "n_samples": len(samples),
            "parameters": {
                "axial_modulus_soft_mpa": fit.e_soft / 1e6,
                "axial_modulus_taut_mpa": fit.e_taut / 1e6,
                "wrinkle_strain": fit.wrinkle_strain,
            },
            "residuals": {"sse_pa2": fit.sse, "r_squared": r2, "single_regime": fit.single_regime},
        }
        if transverse:
            import numpy as np

            x = np.array([s.strain for s in transverse])
            y = np.array([s.stress for s in transverse])
            circ = float(np.dot(x, y) / np.dot(x, x))
            card["parameters"]["circ_modulus_mpa"] = circ / 1e6
            card["parameters"]["anisotropy_ratio"] = circ / fit.e_soft
    elif args.kind == "capstan":
        samples = read_capstan_csv(args.csv)
        k_theta, mu = fit_capstan(samples)
        logs = [math.log(f) for _, f in samples]
        log_sse = sum((y - (math.log(k_theta) + mu * a)) ** 2 for (a, _), y in zip(samples, logs))
        log_mean = sum(logs) / len(logs)
        log_sst = sum((y - log_mean) ** 2 for y in logs)
        r2 = 1.0 if log_sst == 0 and log_sse <= 1e-30 else (1.0 - log_sse / log_sst if log_sst > 0 else 0.0)
        card = {
            "kind": "capstan",
            "source": os.path.basename(args.csv),
            "n_samples": len(samples),
            "parameters": {"k_theta_n": k_theta, "mu": mu},
            "residuals": {"log_sse": log_sse, "r_squared": r2},
        }
    else:
        points = read_prestretch_csv(args.csv)
        fit = fit_linear(points)
        card = {
            "kind": "prestretch",
            "source": os.path.basename(args.csv),
            "n_samples": len(points),
            "parameters": {"prestretch_coeff": fit.slope, "intercept": fit.intercept},
            "residuals": {"sse": fit.sse, "r_squared": fit.r_squared},
        }
    out = _out_path(args, f"model_card_{args.kind}.json")
    write_model_card(out, card)
    print(f"wrote {out}")
    return EXIT_OK


# -- sweep ---------------------------------------------------------------------


def cmd_sweep(args) -> int:
    pressures_kpa = _parse_range(args.prange)
    if not pressures_kpa:
        raise TableError("empty pressure range")
    pressures = [p * 1e3 for p in pressures_kpa]
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        spec = robot_from_dict(payload["robot"] if "robot" in payload else payload)
    else:
        spec = default_robot_spec()

    fpam = FpamSpec()
    summary = {"mode": args.mode, "pressure_range_kpa": [pressures_kpa[0], pressures_kpa[-1]]}
    charts = []

    if args.mode == "lengthening":
        points = curvature_sweep(spec, pressures, "lengthening")
        path = _out_path(args, "sweep_lengthening.csv")
        write_csv(path, SWEEP_HEADER, sweep_rows(points))
        print(f"wrote {path}")
        charts.append(("lengthening", [(p.pressure / 1e3, p.curvature) for p in points]))
        bent = [p for p in points if p.curvature > 0]
        if bent:
            best = max(bent, key=lambda p: p.curvature)
            summary["min_R_mm"] = best.inner_radius * 1e3
            summary["min_R_at_kpa"] = best.pressure / 1e3
            print(f"min radius of curvature: {best.inner_radius*1e3:.1f} mm at {best.pressure/1e3:.0f} kPa")
        fpam_best = 0.0
        for body_p in FPAM_BODY_PRESSURES:
            fp_points = curvature_sweep(spec, pressures, FpamMode(fpam, body_p))
            label = f"fpam_body_{body_p/1e3:.0f}kpa"
            fp_path = _out_path(args, f"sweep_{label}.csv")
            write_csv(fp_path, SWEEP_HEADER, sweep_rows(fp_points))
            charts.append((label, [(p.pressure / 1e3, p.curvature) for p in fp_points]))
            fpam_best = max(fpam_best, max(p.curvature for p in fp_points))
        if bent and fpam_best > 0:
            ratio = max(p.curvature for p in points) / fpam_best
            summary["lengthening_fpam_ratio"] = ratio
            print(f"lengthening/fPAM curvature ratio: {ratio:.2f}")
    else:
        for body_p in FPAM_BODY_PRESSURES:
            fp_points = curvature_sweep(spec, pressures, FpamMode(fpam, body_p))
            label = f"fpam_body_{body_p/1e3:.0f}kpa"
            path = _out_path(args, f"sweep_{label}.csv")
            write_csv(path, SWEEP_HEADER, sweep_rows(fp_points))
            print(f"wrote {path}")
            charts.append((label, [(p.pressure / 1e3, p.curvature) for p in fp_points]))

    svg = svg_line_chart(charts, "actuation pressure (kPa)", "curvature (1/m)")
    svg_path = _out_path(args, "sweep.svg")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(svg + "\n")
    summary_path = _out_path(args, "sweep_summary.json")
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {svg_path}")
    print(f"wrote {summary_path}")
    return EXIT_OK


# -- simulate ------------------------------------------------------------------


def cmd_simulate(args) -> int:
    scenario = _load_any_scenario(args)
    sim = scenario.build_sim()
    snapshots = [snapshot_dict(scenario.spec, sim.state)]
    for command in scenario.script:
        state = sim.step(command)
        snapshots.append(snapshot_dict(scenario.spec, state, state.events_at(state.tick)))
    state = sim.state

    lines = event_log_lines(state.events)
    if args.format == "csv":
        path = _out_path(args, "events.csv")
        write_csv(path, EVENT_HEADER, [(e.tick, e.name, e.detail) for e in state.events])
    else:
        path = _out_path(args, "events.jsonl")
        with open(path, "w", encoding="utf-8") as fh:
            for e in state.events:
                fh.write(json.dumps({"tick": e.tick, "event": e.name, "detail": e.detail}) + "\n")
    snap_path = _out_path(args, "snapshots.jsonl")
    with open(snap_path, "w", encoding="utf-8") as fh:
        for snap in snapshots:
            fh.write(json.dumps(snap, sort_keys=True) + "\n")
    env_path = _out_path(args, "environment.json")
    with open(env_path, "w", encoding="utf-8") as fh:
        json.dump(environment_dict(scenario.env), fh, indent=2, sort_keys=True)
        fh.write("\n")

    for line in lines:
        print(line)
    all_reached = all(state.targets_reached) if state.targets_reached else True
    for i, reached in enumerate(state.targets_reached):
        print(f"target {i}: {'reached' if reached else 'missed'}")
    print(f"wrote {path}, {snap_path}, {env_path}")
    return EXIT_OK if all_reached else EXIT_NO_PLAN


# -- plan ----------------------------------------------------------------------


def cmd_plan(args) -> int:
    scenario = _load_any_scenario(args)
    try:
        tx, ty = (float(v) for v in args.target.split(","))
    except ValueError:
        raise TableError(f"--target must be x,y in mm, got {args.target!r}") from None
    target = (tx * 1e-3, ty * 1e-3)
    grid = [p * 1e3 for p in _parse_range(args.grid)]
    tolerance = args.tolerance * 1e-3

    frontier = evaluate_frontier(scenario.spec, target, grid)
    frontier_path = _out_path(args, "plan_frontier.csv")
    write_csv(
        frontier_path,
        FRONTIER_HEADER,
        [
            ["".join("n" if s is None else s.value[0] for s in a), p / 1e3, c * 1e3]
            for a, p, c in frontier
        ],
    )

    plan = plan_to_target(scenario.spec, target, grid, tolerance)
    if plan is None:
        print(f"no plan within {args.tolerance:.1f} mm of ({tx:.1f}, {ty:.1f}) mm")
        print(f"wrote {frontier_path}")
        return EXIT_NO_PLAN

    payload = {
        "assignment": ["none" if s is None else s.value for s in plan.assignment],
        "pressure_kpa": plan.pressure / 1e3,
        "predicted_tip_mm": {
            "x": plan.predicted_tip.x * 1e3,
            "y": plan.predicted_tip.y * 1e3,
            "heading_deg": math.degrees(plan.predicted_tip.heading),
        },
        "cost_mm": plan.cost * 1e3,
        "target_mm": [tx, ty],
    }

    if args.check:
        from .core import JamState

        sim = Simulation(scenario.spec, scenario.env, scenario.config)
        sim.step(SetPressure(plan.pressure))
        for i, side in enumerate(plan.assignment):
            if side is not None:
                sim.step(SetJam(i, side, JamState.JAMMED))
        sim.step(Grow(scenario.spec.total_rest_length * 4))
        payload["check"] = {
            "collisions": len(sim.state.contacts),
            "events": [f"{e.name}:{e.detail}" for e in sim.state.events],
        }

    plan_path = _out_path(args, "plan.json")
    with open(plan_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        f"plan: assignment={','.join(payload['assignment'])} "
        f"pressure={payload['pressure_kpa']:.2f} kPa cost={payload['cost_mm']:.3f} mm"
    )
    print(f"wrote {plan_path}, {frontier_path}")
    return EXIT_OK


# -- serve ---------------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    port = args.port if args.port is not None else int(os.environ.get("VINESIM_PORT", "8080"))
    app = create_app(ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (
        TableError,
        ScenarioError,
        SpecValidationError,
        FitError,
        CommandError,
        PlannerError,
        json.JSONDecodeError,
        FileNotFoundError,
        IsADirectoryError,
        KeyError,
    ) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
