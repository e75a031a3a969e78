"""Interactive steering service: sessions, command channel, state stream.

One HTTP endpoint creates a session around a growth simulation; a
WebSocket per session then carries CommandMessages in and StateMessages
out. Commands apply in strict seq order, exactly once; every applied
command produces one snapshot fanned out to all subscribers, and late
subscribers first receive the current full snapshot. Distinct sessions
are fully independent; within a session, application is serialized.
"""

from __future__ import annotations

import asyncio
import json
import math
import os
import secrets
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, HTMLResponse, PlainTextResponse

from .growsim import CommandError, Simulation
from .planner import PlannerError, plan_to_target
from .scenario import (
    Scenario,
    ScenarioError,
    bundled_scenario_names,
    command_from_dict,
    environment_dict,
    event_log_lines,
    load_bundled,
    scenario_from_dict,
    snapshot_dict,
)

DEFAULT_MAX_SESSIONS = 64
DEFAULT_IDLE_TIMEOUT = 30 * 60.0  # s

PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>vinesim</title></head>
<body><h1>vinesim steering service</h1>
<p>No UI bundle is built. The API is live: create a session with
<code>POST /sessions</code> and connect to <code>/sessions/{id}/ws</code>.</p>
</body></html>
"""


@dataclass
class Session:
    id: str
    scenario: Scenario
    sim: Simulation
    seq: int = 0  # last accepted command seq
    last_active: float = field(default_factory=time.monotonic)
    subscribers: List[asyncio.Queue] = field(default_factory=list)
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)

    def touch(self) -> None:
        self.last_active = time.monotonic()

    def state_message(self, events=()) -> Dict[str, Any]:
        msg = snapshot_dict(self.scenario.spec, self.sim.state, events)
        msg["type"] = "state"
        msg["session"] = self.id
        msg["seq"] = self.seq  # last applied command; lets clients resync after reconnect
        return msg


class SessionRegistry:
    def __init__(self, max_sessions: int = DEFAULT_MAX_SESSIONS, idle_timeout: float = DEFAULT_IDLE_TIMEOUT):
        self.max_sessions = max_sessions
        self.idle_timeout = idle_timeout
        self.sessions: Dict[str, Session] = {}

    def purge_idle(self) -> None:
        now = time.monotonic()
        for sid in [s for s, sess in self.sessions.items() if now - sess.last_active > self.idle_timeout]:
            del self.sessions[sid]

    def create(self, scenario: Scenario) -> Session:
        self.purge_idle()
        if len(self.sessions) >= self.max_sessions:
            raise HTTPException(status_code=429, detail="session limit reached")
        sid = secrets.token_urlsafe(16)  # 128 bits of entropy
        session = Session(id=sid, scenario=scenario, sim=scenario.build_sim())
        self.sessions[sid] = session
        return session

    def get(self, sid: str) -> Optional[Session]:
        self.purge_idle()
        session = self.sessions.get(sid)
        if session:
            session.touch()
        return session


def _resolve_scenario(payload: Any) -> Scenario:
    if isinstance(payload, str):
        try:
            return load_bundled(payload)
        except ScenarioError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
    if isinstance(payload, dict):
        try:
            return scenario_from_dict(payload)
        except ScenarioError as exc:
            raise HTTPException(status_code=422, detail={"path": exc.path, "error": str(exc)}) from exc
    raise HTTPException(status_code=422, detail="scenario must be a bundled name or an inline object")


def create_app(
    ui_dir: Optional[str] = None,
    max_sessions: int = DEFAULT_MAX_SESSIONS,
    idle_timeout: float = DEFAULT_IDLE_TIMEOUT,
) -> FastAPI:
    app = FastAPI(title="vinesim steering service")
    registry = SessionRegistry(max_sessions=max_sessions, idle_timeout=idle_timeout)
    app.state.registry = registry
    if ui_dir is None:
        candidate = os.path.join(os.getcwd(), "frontend", "dist")
        ui_dir = candidate if os.path.isdir(candidate) else None

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(registry.sessions)}

    @app.get("/scenarios")
    def scenarios():
        return {"scenarios": bundled_scenario_names()}

    @app.post("/sessions")
    async def create_session(payload: Dict[str, Any]):
        scenario = _resolve_scenario(payload.get("scenario"))
        session = registry.create(scenario)
        return {
            "session": session.id,
            "scenario": session.scenario.name,
            "environment": environment_dict(session.scenario.env),
            "state": session.state_message(),
        }

    def _require(sid: str) -> Session:
        session = registry.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="no such session")
        return session

    @app.get("/sessions/{sid}/environment")
    def session_environment(sid: str):
        session = _require(sid)
        return {"scenario": session.scenario.name, "environment": environment_dict(session.scenario.env)}

    @app.get("/sessions/{sid}/log")
    def session_log(sid: str):
        session = _require(sid)
        lines = event_log_lines(session.sim.state.events)
        return PlainTextResponse("tick,event,detail\n" + "".join(line + "\n" for line in lines))

    @app.post("/sessions/{sid}/plan")
    def session_plan(sid: str, payload: Dict[str, Any]):
        session = _require(sid)
        target_mm = payload.get("target_mm")
        if (
            not isinstance(target_mm, list)
            or len(target_mm) != 2
            or not all(isinstance(v, (int, float)) for v in target_mm)
        ):
            raise HTTPException(status_code=422, detail="target_mm must be [x, y]")
        grid_kpa = payload.get("grid_kpa") or [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0]
        tolerance_mm = float(payload.get("tolerance_mm", 10.0))
        try:
            plan = plan_to_target(
                session.scenario.spec,
                (target_mm[0] * 1e-3, target_mm[1] * 1e-3),
                [p * 1e3 for p in grid_kpa],
                tolerance_mm * 1e-3,
            )
        except PlannerError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if plan is None:
            return {"no_plan": True}
        from .kinematics import backbone_polyline
        from .planner import chain_for_assignment

        chain = chain_for_assignment(session.scenario.spec, plan.assignment, plan.pressure)
        ghost = backbone_polyline(chain, session.scenario.spec.radius, 5e-4)
        return {
            "no_plan": False,
            "assignment": ["none" if s is None else s.value for s in plan.assignment],
            "pressure_kpa": plan.pressure / 1e3,
            "cost_mm": plan.cost * 1e3,
            "predicted_tip_mm": {
                "x": plan.predicted_tip.x * 1e3,
                "y": plan.predicted_tip.y * 1e3,
                "heading_deg": math.degrees(plan.predicted_tip.heading),
            },
            "ghost_backbone_mm": [[p[0] * 1e3, p[1] * 1e3] for p in ghost],
        }

    @app.websocket("/sessions/{sid}/ws")
    async def session_ws(ws: WebSocket, sid: str):
        await ws.accept()
        session = registry.get(sid)
        if session is None:
            await ws.send_json({"type": "gone", "session": sid})
            await ws.close()
            return
        queue: asyncio.Queue = asyncio.Queue()
        session.subscribers.append(queue)
        sender = asyncio.create_task(_pump(ws, queue))
        try:
            # Late subscribers start from the full current snapshot.
            await queue.put(session.state_message())
            while True:
                raw_text = await ws.receive_text()
                try:
                    raw = json.loads(raw_text)
                except json.JSONDecodeError as exc:
                    await queue.put({"type": "error", "detail": f"invalid JSON: {exc}"})
                    continue
                await _handle_command(session, raw, queue)
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            if queue in session.subscribers:
                session.subscribers.remove(queue)

    async def _pump(ws: WebSocket, queue: asyncio.Queue):
        while True:
            msg = await queue.get()
            await ws.send_json(msg)

    async def _handle_command(session: Session, raw: Any, reply_queue: asyncio.Queue):
        if not isinstance(raw, dict):
            await reply_queue.put({"type": "error", "detail": "command must be an object"})
            return
        seq = raw.get("seq")
        async with session.lock:
            expected = session.seq + 1
            if seq != expected:
                await reply_queue.put(
                    {"type": "rejection", "session": session.id, "expected_seq": expected, "got": seq}
                )
                return
            session.touch()
            cmd = raw.get("cmd")
            try:
                events = _apply(session, cmd)
            except (ScenarioError, CommandError) as exc:
                session.seq = expected
                await reply_queue.put(
                    {"type": "error", "session": session.id, "detail": str(exc), "expected_seq": session.seq + 1}
                )
                return
            session.seq = expected
            message = session.state_message(events)
            for sub in session.subscribers:
                await sub.put(message)

    def _apply(session: Session, cmd: Any):
        if not isinstance(cmd, dict) or "type" not in cmd:
            raise CommandError("cmd must be an object with a 'type'")
        kind = cmd["type"]
        if kind == "reset":
            state = session.sim.reset()
            return state.events_at(state.tick)
        if kind == "load_scenario":
            scenario = cmd.get("name")
            if not isinstance(scenario, str):
                raise CommandError("load_scenario needs a bundled scenario name")
            new_scenario = load_bundled(scenario)
            tick = session.sim.state.tick
            session.scenario = new_scenario
            session.sim = new_scenario.build_sim()
            from dataclasses import replace

            session.sim.state = replace(session.sim.state, tick=tick + 1)
            return ()
        command = command_from_dict({"cmd": kind, **{k: v for k, v in cmd.items() if k != "type"}}, "cmd")
        state = session.sim.step(command)
        return state.events_at(state.tick)

    @app.get("/", response_class=HTMLResponse)
    def index():
        if ui_dir:
            index_path = os.path.join(ui_dir, "index.html")
            if os.path.isfile(index_path):
                return FileResponse(index_path)
        return HTMLResponse(PLACEHOLDER_PAGE)

    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/assets", StaticFiles(directory=ui_dir), name="assets")

    return app
