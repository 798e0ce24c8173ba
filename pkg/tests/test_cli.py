"""CLI behavior: exit codes, output shapes, reproducibility."""

import json

import pytest

from u3t.cli import main
from u3t.records import GameRecord, replay


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerifyCommand:
    def test_xavier_summary_and_report(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, out, _ = run_cli(
            ["verify", "xavier", "--out", str(out_path), "--json"], capsys
        )
        assert code == 0
        assert "max=43" in out
        assert "min=29" in out
        assert "leaves=all-WonX" in out
        assert "statesAtPly17=8" in out
        report = json.loads(out_path.read_text())
        assert report["boundSatisfied"] is True
        assert report["maxPlies"] == 43
        assert report["propertyViolations"] == []
        # --json also mirrors the payload on stdout (last line)
        payload = json.loads(out.splitlines()[-1])
        assert payload["maxPlies"] == 43

    def test_budget_exhaustion_exits_3(self, capsys):
        code, out, _ = run_cli(["verify", "xavier", "--max-nodes", "10"], capsys)
        assert code == 3
        assert "budgetExhausted=true" in out

    def test_verify_all_with_dead_budget_fails_fast(self, capsys):
        code, out, err = run_cli(["verify", "all", "--max-nodes", "1"], capsys)
        assert code == 3
        assert "skipping remaining targets" in err

    def test_lbs_sampled_run(self, capsys):
        code, out, _ = run_cli(
            ["verify", "lbs", "--samples", "400", "--max-nodes", "1000",
             "--seed", "9"], capsys,
        )
        assert code == 0
        assert "mode=sampled" in out
        assert "no X win before ply 29" in out

    def test_invalid_budget_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["verify", "xavier", "--max-nodes", "0"])
        assert e.value.code == 2

    def test_unknown_target_is_usage_error(self):
        with pytest.raises(SystemExit) as e:
            main(["verify", "everything"])
        assert e.value.code == 2


class TestPlayCommand:
    def test_xavier_vs_lbs_single_game(self, capsys):
        code, out, _ = run_cli(
            ["play", "--x", "xavier-winning", "--o", "lbs", "--count", "1"], capsys
        )
        assert code == 0
        assert "game=1 result=WonX plies=31" in out
        assert "tally result=WonX count=1" in out

    def test_fixed_seed_reproducible(self, capsys):
        args = ["play", "--x", "random", "--o", "random", "--count", "10",
                "--seed", "7"]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        assert out1 == out2

    def test_xavier_always_wins(self, capsys):
        code, out, _ = run_cli(
            ["play", "--x", "xavier-winning", "--o", "random", "--count", "5",
             "--seed", "3", "--json"], capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["tally"] == {"WonX": 5}
        for obj in payload["games"]:
            rec = GameRecord.from_json_obj(obj)
            final = replay(rec)
            assert final.status == "WonX"
            assert final.ply <= 43

    def test_seat_mismatch_is_usage_error(self, capsys):
        code, _, err = run_cli(["play", "--x", "lbs", "--o", "random"], capsys)
        assert code == 2
        assert "cannot play X" in err

    def test_unknown_strategy_is_usage_error(self):
        with pytest.raises(SystemExit) as e:
            main(["play", "--x", "alphazero", "--o", "random"])
        assert e.value.code == 2


class TestReplayCommand:
    def test_renders_every_ply_and_marks_active_field(self, capsys, tmp_path):
        path = tmp_path / "game.txt"
        path.write_text("4.4 4.0 0.4")
        code, out, _ = run_cli(["replay", str(path)], capsys)
        assert code == 0
        assert "ply 1: X played 4.4" in out
        assert "ply 3: X played 0.4" in out
        assert "active field: 4" in out
        assert "[" in out  # bracketed active field
        assert out.count("to move:") == 4  # start plus three plies

    def test_json_record_replay(self, capsys, tmp_path):
        rec = GameRecord.from_text("4.4 4.7 7.4")
        path = tmp_path / "game.json"
        path.write_text(rec.to_json())
        code, out, _ = run_cli(["replay", str(path)], capsys)
        assert code == 0
        assert "ply 2: O played 4.7" in out

    def test_final_render_shows_won_and_active_field(self, capsys, tmp_path):
        # 17 moves in: X owns field 0 and it is also the active field
        path = tmp_path / "midgame.txt"
        path.write_text(
            "4.4 4.0 0.8 8.8 8.0 0.3 3.6 6.7 7.7 7.3 3.0 0.0 0.5 5.0 0.2 2.7 7.0"
        )
        code, out, _ = run_cli(["replay", str(path)], capsys)
        assert code == 0
        final = out.rsplit("ply 17", 1)[1]
        assert "field 0: WonX" in final
        assert "active field: 0" in final

    def test_illegal_move_names_ply(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("4.4 0.0")
        code, _, err = run_cli(["replay", str(path)], capsys)
        assert code == 1
        assert "illegal move at ply 2" in err

    def test_malformed_record(self, capsys, tmp_path):
        path = tmp_path / "junk.txt"
        path.write_text("4.4 nope")
        code, _, err = run_cli(["replay", str(path)], capsys)
        assert code == 2
        assert "malformed" in err

    def test_empty_record_renders_empty_grid(self, capsys, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        code, out, _ = run_cli(["replay", str(path)], capsys)
        assert code == 0
        assert "start" in out
        assert "ply: 0" in out


def test_env_seed_default(capsys, monkeypatch):
    monkeypatch.setenv("U3T_SEED", "123")
    _, out1, _ = run_cli(["play", "--x", "random", "--o", "random", "--count", "2"], capsys)
    _, out2, _ = run_cli(
        ["play", "--x", "random", "--o", "random", "--count", "2", "--seed", "123"],
        capsys,
    )
    assert out1 == out2
