import pytest
from fastapi.testclient import TestClient

from vinesim.scenario import event_log_lines, load_bundled
from vinesim.server import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def create_session(client, scenario="gap"):
    r = client.post("/sessions", json={"scenario": scenario})
    assert r.status_code == 200
    return r.json()


class TestHttp:
    def test_healthz(self, client):
        assert client.get("/healthz").json()["status"] == "ok"

    def test_scenarios_list(self, client):
        assert client.get("/scenarios").json()["scenarios"] == ["gap", "push", "scurve"]

    def test_create_session_initial_snapshot(self, client):
        data = create_session(client)
        assert data["state"]["tick"] == 0
        assert data["state"]["everted_mm"] == 0.0
        assert data["environment"]["gaps"][0]["width_mm"] == 25.0

    def test_distinct_session_ids(self, client):
        a = create_session(client)["session"]
        b = create_session(client)["session"]
        assert a != b
        assert len(a) >= 22  # 128 bits, urlsafe base64

    def test_unknown_scenario_404(self, client):
        assert client.post("/sessions", json={"scenario": "nope"}).status_code == 404

    def test_malformed_inline_422_with_path(self, client):
        r = client.post(
            "/sessions",
            json={"scenario": {"robot": {"radius_mm": 16}}},
        )
        assert r.status_code == 422
        assert r.json()["detail"]["path"] == "robot.segments"

    def test_session_limit(self):
        client = TestClient(create_app(max_sessions=2))
        create_session(client)
        create_session(client)
        assert client.post("/sessions", json={"scenario": "gap"}).status_code == 429

    def test_missing_session_404(self, client):
        assert client.get("/sessions/nope/log").status_code == 404

    def test_idle_sessions_expire(self):
        import time

        client = TestClient(create_app(idle_timeout=0.05))
        sid = create_session(client)["session"]
        assert client.get(f"/sessions/{sid}/log").status_code == 200
        time.sleep(0.1)
        assert client.get(f"/sessions/{sid}/log").status_code == 404

    def test_malformed_ws_payload_reports_error(self, client):
        sid = create_session(client)["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_text("{broken")
            err = ws.receive_json()
            assert err["type"] == "error"
            assert "invalid JSON" in err["detail"]
            # The channel still works afterwards.
            ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "grow", "mm": 5}})
            assert ws.receive_json()["tick"] == 1

    def test_placeholder_index(self, client):
        r = client.get("/")
        assert r.status_code == 200
        assert "vinesim" in r.text


class TestWebSocket:
    def test_snapshot_per_command_in_order(self, client):
        data = create_session(client)
        sid = data["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            assert ws.receive_json()["tick"] == 0  # late-subscriber snapshot
            for i, cmd in enumerate(
                [
                    {"type": "set_pressure", "kpa": 40},
                    {"type": "grow", "mm": 50},
                    {"type": "grow", "mm": 30},
                ],
                start=1,
            ):
                ws.send_json({"session": sid, "seq": i, "cmd": cmd})
                msg = ws.receive_json()
                assert msg["type"] == "state"
                assert msg["tick"] == i

    def test_duplicate_seq_rejected_idempotently(self, client):
        sid = create_session(client)["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "set_pressure", "kpa": 10}})
            state = ws.receive_json()
            assert state["tick"] == 1
            for _ in range(2):
                ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "grow", "mm": 10}})
                rej = ws.receive_json()
                assert rej["type"] == "rejection"
                assert rej["expected_seq"] == 2
            # State unchanged by the replays.
            ws.send_json({"session": sid, "seq": 2, "cmd": {"type": "grow", "mm": 10}})
            msg = ws.receive_json()
            assert msg["tick"] == 2
            assert msg["everted_mm"] == pytest.approx(10.0)

    def test_out_of_order_seq_rejected(self, client):
        sid = create_session(client)["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 5, "cmd": {"type": "grow", "mm": 10}})
            rej = ws.receive_json()
            assert rej["type"] == "rejection"
            assert rej["expected_seq"] == 1
            assert rej["got"] == 5

    def test_jam_then_grow_curves_left(self, client):
        sid = create_session(client, "scurve")["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "set_jam", "segment": 0, "side": "left", "state": "jam"}})
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 2, "cmd": {"type": "set_pressure", "kpa": 40}})
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 3, "cmd": {"type": "grow", "mm": 50}})
            msg = ws.receive_json()
            assert msg["segments"][0]["left"] == "jammed"
            assert msg["backbone"][-1][1] > 0  # tip y in mm, curved left

    def test_two_subscribers_identical_sequences(self, client):
        sid = create_session(client)["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as a:
            a.receive_json()
            with client.websocket_connect(f"/sessions/{sid}/ws") as b:
                b.receive_json()
                seen_a, seen_b = [], []
                for i in range(1, 4):
                    a.send_json({"session": sid, "seq": i, "cmd": {"type": "grow", "mm": 10}})
                    seen_a.append(a.receive_json())
                    seen_b.append(b.receive_json())
                assert seen_a == seen_b

    def test_late_subscriber_gets_full_current_snapshot(self, client):
        sid = create_session(client)["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as a:
            a.receive_json()
            for i in range(1, 6):
                a.send_json({"session": sid, "seq": i, "cmd": {"type": "grow", "mm": 5}})
                a.receive_json()
            with client.websocket_connect(f"/sessions/{sid}/ws") as late:
                snap = late.receive_json()
                assert snap["tick"] == 5
                assert snap["everted_mm"] == pytest.approx(25.0)

    def test_reset_restores_initial_state_tick_continues(self, client):
        sid = create_session(client)["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "grow", "mm": 40}})
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 2, "cmd": {"type": "reset"}})
            msg = ws.receive_json()
            assert msg["tick"] == 2
            assert msg["everted_mm"] == 0.0

    def test_engine_error_consumes_seq(self, client):
        sid = create_session(client)["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "set_jam", "segment": 99, "side": "left", "state": "jam"}})
            err = ws.receive_json()
            assert err["type"] == "error"
            assert err["expected_seq"] == 2

    def test_dead_session_gone(self, client):
        with client.websocket_connect("/sessions/unknown/ws") as ws:
            assert ws.receive_json()["type"] == "gone"


class TestEngineParity:
    def test_event_log_matches_cli_simulate(self, client):
        """The service is a thin shell over the same engine: identical
        scripts must give byte-identical event logs."""
        scenario = load_bundled("gap")
        sim = scenario.build_sim()
        sim.apply_script(scenario.script)
        expected = "tick,event,detail\n" + "".join(
            line + "\n" for line in event_log_lines(sim.state.events)
        )

        sid = create_session(client, "gap")["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "set_pressure", "kpa": 40}})
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 2, "cmd": {"type": "grow", "mm": 200}})
            ws.receive_json()
        log = client.get(f"/sessions/{sid}/log").text
        assert log == expected

    def test_plan_endpoint(self, client):
        sid = create_session(client, "scurve")["session"]
        r = client.post(f"/sessions/{sid}/plan", json={"target_mm": [179.3, 135.8]})
        body = r.json()
        assert not body["no_plan"]
        assert body["assignment"] == ["left", "right"]
        assert len(body["ghost_backbone_mm"]) > 2

    def test_plan_endpoint_no_plan(self, client):
        sid = create_session(client, "scurve")["session"]
        r = client.post(f"/sessions/{sid}/plan", json={"target_mm": [9999.0, 0.0]})
        assert r.json()["no_plan"]

    def test_load_scenario_command(self, client):
        sid = create_session(client, "gap")["session"]
        with client.websocket_connect(f"/sessions/{sid}/ws") as ws:
            ws.receive_json()
            ws.send_json({"session": sid, "seq": 1, "cmd": {"type": "load_scenario", "name": "push"}})
            msg = ws.receive_json()
            assert msg["tick"] == 1
            assert msg["everted_mm"] == 0.0
        env = client.get(f"/sessions/{sid}/environment").json()
        assert env["scenario"] == "push"
        assert env["environment"]["masses"]
