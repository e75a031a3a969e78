import json
import math

import pytest

from vinesim.cli import main
from vinesim.core import SkinMaterial
from vinesim.material import axial_stress
from vinesim.tables import (
    CAPSTAN_HEADER,
    PRESTRETCH_HEADER,
    STRESS_HEADER,
    SWEEP_HEADER,
    read_sweep_csv,
    write_csv,
)


def write_two_regime_csv(path, e_soft=2e6, e_taut=800e6, e_w=1.2):
    mat = SkinMaterial(
        axial_modulus_soft=e_soft, axial_modulus_taut=e_taut, circ_modulus=e_taut, wrinkle_strain=e_w
    )
    rows = [
        [s, axial_stress(mat, s), "longitudinal"]
        for s in (0.2, 0.5, 0.8, 1.0, 1.2, 1.5, 1.8, 2.0)
    ]
    rows += [[s, e_taut * s, "transverse"] for s in (0.005, 0.01, 0.02, 0.03)]
    write_csv(path, STRESS_HEADER, rows)


class TestFit:
    def test_stress_strain_round_trip(self, tmp_path):
        csv_path = tmp_path / "skin.csv"
        write_two_regime_csv(str(csv_path))
        assert main(["--out", str(tmp_path), "fit", str(csv_path), "--kind", "stress_strain"]) == 0
        card = json.loads((tmp_path / "model_card_stress_strain.json").read_text())
        assert card["parameters"]["axial_modulus_soft_mpa"] == pytest.approx(2.0, rel=1e-9)
        assert card["parameters"]["axial_modulus_taut_mpa"] == pytest.approx(800.0, rel=1e-9)
        assert card["parameters"]["wrinkle_strain"] == pytest.approx(1.2, rel=1e-9)
        assert card["parameters"]["circ_modulus_mpa"] == pytest.approx(800.0, rel=1e-9)
        assert not card["residuals"]["single_regime"]
        assert card["residuals"]["r_squared"] == pytest.approx(1.0, abs=1e-9)

    def test_capstan_zero_force_row_named(self, tmp_path, capsys):
        csv_path = tmp_path / "capstan.csv"
        write_csv(str(csv_path), CAPSTAN_HEADER, [[0.0, 2.0], [0.5, 0.0], [1.0, 3.0]])
        assert main(["--out", str(tmp_path), "fit", str(csv_path), "--kind", "capstan"]) == 2
        err = capsys.readouterr().err
        assert "line 3" in err

    def test_capstan_round_trip(self, tmp_path):
        csv_path = tmp_path / "capstan.csv"
        k, mu = 2.0, 0.3
        rows = [[t, k * math.exp(mu * t)] for t in (0.0, 0.5, 1.0, 2.0, 3.0)]
        write_csv(str(csv_path), CAPSTAN_HEADER, rows)
        assert main(["--out", str(tmp_path), "fit", str(csv_path), "--kind", "capstan"]) == 0
        card = json.loads((tmp_path / "model_card_capstan.json").read_text())
        assert card["parameters"]["k_theta_n"] == pytest.approx(k, rel=1e-9)
        assert card["parameters"]["mu"] == pytest.approx(mu, rel=1e-9)
        assert card["residuals"]["r_squared"] == pytest.approx(1.0, abs=1e-9)

    def test_prestretch_card(self, tmp_path):
        csv_path = tmp_path / "prestretch.csv"
        coeff = 0.6
        rows = [[s, coeff * s] for s in (0.5, 1.0, 1.5, 2.0, 2.5)]  # 5 specimens
        write_csv(str(csv_path), PRESTRETCH_HEADER, rows)
        assert main(["--out", str(tmp_path), "fit", str(csv_path), "--kind", "prestretch"]) == 0
        card = json.loads((tmp_path / "model_card_prestretch.json").read_text())
        assert card["parameters"]["prestretch_coeff"] == pytest.approx(coeff, rel=1e-9)
        assert card["residuals"]["r_squared"] == pytest.approx(1.0, abs=1e-12)

    def test_wrong_header_is_input_error(self, tmp_path, capsys):
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text("a,b\n1,2\n")
        assert main(["--out", str(tmp_path), "fit", str(csv_path), "--kind", "capstan"]) == 2
        assert "header" in capsys.readouterr().err


class TestSweep:
    def test_lengthening_sweep_outputs(self, tmp_path, capsys):
        assert main(["--out", str(tmp_path), "sweep", "--range", "0:60:5"]) == 0
        out = capsys.readouterr().out
        assert "min radius of curvature" in out
        assert "lengthening/fPAM curvature ratio" in out
        rows = read_sweep_csv(str(tmp_path / "sweep_lengthening.csv"))
        assert len(rows) == 13
        curvature = [r[4] for r in rows]
        assert all(b >= a for a, b in zip(curvature, curvature[1:]))
        summary = json.loads((tmp_path / "sweep_summary.json").read_text())
        assert summary["min_R_mm"] <= 52.0
        assert summary["lengthening_fpam_ratio"] >= 3.0
        assert (tmp_path / "sweep.svg").read_text().startswith("<svg")

    def test_single_point_zero_sweep(self, tmp_path):
        assert main(["--out", str(tmp_path), "sweep", "--range", "0:0:0"]) == 0
        rows = read_sweep_csv(str(tmp_path / "sweep_lengthening.csv"))
        assert len(rows) == 1
        assert rows[0][4] == 0.0  # curvature at 0 kPa

    def test_csv_round_trips_bit_exactly(self, tmp_path):
        assert main(["--out", str(tmp_path), "sweep", "--range", "0:60:7"]) == 0
        path = tmp_path / "sweep_lengthening.csv"
        original = path.read_bytes()
        rows = read_sweep_csv(str(path))
        rewritten = tmp_path / "rewrite.csv"
        write_csv(str(rewritten), SWEEP_HEADER, rows)
        assert rewritten.read_bytes() == original

    def test_every_emitted_csv_round_trips(self, tmp_path):
        from vinesim.tables import (
            EVENT_HEADER,
            FRONTIER_HEADER,
            read_event_log_csv,
            read_frontier_csv,
        )

        assert main(["--out", str(tmp_path), "simulate", "gap", "--bundled"]) == 0
        assert main(["--out", str(tmp_path), "plan", "scurve", "--bundled", "--target", "179.3,135.8"]) == 0
        for name, header, reader in (
            ("events.csv", EVENT_HEADER, read_event_log_csv),
            ("plan_frontier.csv", FRONTIER_HEADER, read_frontier_csv),
        ):
            path = tmp_path / name
            original = path.read_bytes()
            rows = reader(str(path))
            rewritten = tmp_path / f"rt_{name}"
            write_csv(str(rewritten), header, rows)
            assert rewritten.read_bytes() == original

    def test_empty_range_rejected(self, tmp_path, capsys):
        assert main(["--out", str(tmp_path), "sweep", "--range", "60:0:5"]) == 2


class TestSimulate:
    @pytest.mark.parametrize("name", ["gap", "push", "scurve"])
    def test_bundled_scenarios_succeed(self, tmp_path, name, capsys):
        assert main(["--out", str(tmp_path), "simulate", name, "--bundled"]) == 0
        out = capsys.readouterr().out
        assert "target 0: reached" in out

    def test_gap_scenario_events(self, tmp_path, capsys):
        main(["--out", str(tmp_path), "simulate", "gap", "--bundled"])
        log = (tmp_path / "events.csv").read_text()
        assert "gap-passed" in log
        assert "target-reached" in log

    def test_push_scenario_events(self, tmp_path):
        main(["--out", str(tmp_path), "simulate", "push", "--bundled"])
        assert "mass-pushed" in (tmp_path / "events.csv").read_text()

    def test_scurve_final_heading_parallel(self, tmp_path):
        main(["--out", str(tmp_path), "simulate", "scurve", "--bundled"])
        snaps = [json.loads(line) for line in (tmp_path / "snapshots.jsonl").read_text().splitlines()]
        last = snaps[-1]
        assert abs(last["tip_mm"]["y"] - 135.8) < 2.0  # offset laterally
        assert abs(last["tip_mm"]["heading_deg"]) < 1e-9  # parallel to start

    def test_byte_identical_reruns(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        main(["--out", str(out_a), "simulate", "gap", "--bundled"])
        main(["--out", str(out_b), "simulate", "gap", "--bundled"])
        assert (out_a / "events.csv").read_bytes() == (out_b / "events.csv").read_bytes()
        assert (out_a / "snapshots.jsonl").read_bytes() == (out_b / "snapshots.jsonl").read_bytes()

    def test_jsonl_format(self, tmp_path):
        assert main(["--out", str(tmp_path), "--format", "jsonl", "simulate", "push", "--bundled"]) == 0
        lines = (tmp_path / "events.jsonl").read_text().splitlines()
        assert all("event" in json.loads(line) for line in lines)

    def test_missing_target_exit_code(self, tmp_path):
        scenario = {
            "robot": {"radius_mm": 16, "segments": [{"length_mm": 100}]},
            "environment": {"targets": [[500, 0]]},
            "script": [{"cmd": "grow", "mm": 50}],
        }
        path = tmp_path / "s.json"
        path.write_text(json.dumps(scenario))
        assert main(["--out", str(tmp_path), "simulate", str(path)]) == 3

    def test_schema_violation_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"robot": {"radius_mm": 16}}))
        assert main(["--out", str(tmp_path), "simulate", str(path)]) == 2
        assert "segments" in capsys.readouterr().err

    def test_seed_flag_is_accepted_noop(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(["--out", str(out_a), "--seed", "1", "simulate", "push", "--bundled"]) == 0
        assert main(["--out", str(out_b), "--seed", "999", "simulate", "push", "--bundled"]) == 0
        assert (out_a / "events.csv").read_bytes() == (out_b / "events.csv").read_bytes()


class TestPlan:
    def test_straight_ahead_all_none(self, tmp_path, capsys):
        scenario = {"robot": {"radius_mm": 16, "segments": [{"length_mm": 100}, {"length_mm": 100}]}}
        path = tmp_path / "s.json"
        path.write_text(json.dumps(scenario))
        # Straight reach at 30 kPa: 200 mm * (1 + 0.762) = 352.4 mm
        assert main(["--out", str(tmp_path), "plan", str(path), "--target", "352.47,0"]) == 0
        plan = json.loads((tmp_path / "plan.json").read_text())
        assert plan["assignment"] == ["none", "none"]
        assert (tmp_path / "plan_frontier.csv").exists()

    def test_scurve_style_two_segment_plan(self, tmp_path):
        assert (
            main(
                ["--out", str(tmp_path), "plan", "scurve", "--bundled", "--target", "179.3,135.8", "--check"]
            )
            == 0
        )
        plan = json.loads((tmp_path / "plan.json").read_text())
        assert plan["assignment"] == ["left", "right"]
        assert plan["check"]["collisions"] == 0

    def test_unreachable_exit_3(self, tmp_path):
        assert (
            main(["--out", str(tmp_path), "plan", "gap", "--bundled", "--target", "5000,0"]) == 3
        )

    def test_bad_target_exit_2(self, tmp_path):
        assert main(["--out", str(tmp_path), "plan", "gap", "--bundled", "--target", "oops"]) == 2
