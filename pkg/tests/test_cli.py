"""Tests for the command-line entry point."""

import json

import pytest

from eh_vortices.cli import main


@pytest.fixture(autouse=True)
def _quiet(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "WARNING")


class TestVerifyCommand:
    def test_pass(self, tmp_path, capsys):
        assert main(["verify", "--case", "a", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "status=PASS" in out
        assert "series.status=PASS" in out
        assert "tabulated.status=FAIL" in out
        assert (tmp_path / "verify_a.txt").is_file()

    def test_mutation_fails(self, tmp_path, capsys):
        code = main(["verify", "--case", "a", "--mutate", "beta.x:1e-3", "--out", str(tmp_path)])
        assert code == 1
        assert "status=FAIL" in capsys.readouterr().out

    def test_bad_mutation_is_a_config_error(self, tmp_path):
        assert main(["verify", "--mutate", "beta.q:1", "--out", str(tmp_path)]) == 2

    def test_config_file_with_flag_override(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"case": "a", "mutate": "beta.x:1e-3"}), encoding="utf-8")
        assert main(["verify", "--config", str(config), "--case", "b", "--out", str(tmp_path)]) == 1
        assert (tmp_path / "verify_b.txt").is_file()


class TestTrackCommand:
    def test_single_frame_rejected(self, tmp_path):
        assert main(["track", "--t", "0:1:1", "--out", str(tmp_path)]) == 2

    def test_classical_pair_before_birth(self, tmp_path):
        code = main(
            [
                "track",
                "--case",
                "b",
                "--classical",
                "--resolution",
                "16",
                "--t",
                "0:0.99:5",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        assert len(list(tmp_path.glob("frame_*.json"))) == 5
        assert (tmp_path / "topology.csv").is_file()
        assert (tmp_path / "track.log").is_file()
        events = json.loads((tmp_path / "events.json").read_text(encoding="utf-8"))
        assert events["counts"] == [0, 0, 0, 0, 0]

    @pytest.mark.parametrize("times", [["--t=-0.5:0.5:2"], ["--t", "-0.5:0.5:2"]])
    def test_negative_start(self, tmp_path, times):
        args = ["track", "--case", "b", "--classical", "--resolution", "16", *times]
        assert main([*args, "--y-bounds", "-2:1", "--out", str(tmp_path)]) == 0
        events = json.loads((tmp_path / "events.json").read_text(encoding="utf-8"))
        assert events["config"]["t_start"] == -0.5
        assert events["config"]["grid"]["bounds"][1] == [-2.0, 1.0]


class TestRenderCommand:
    def test_missing_input(self, tmp_path):
        assert main(["render", str(tmp_path / "none.json"), "--out", str(tmp_path)]) == 2

    def test_empty_frame(self, tmp_path, empty_frame_file):
        out = tmp_path / "svg"
        assert main(["render", str(empty_frame_file), "--out", str(out)]) == 0
        assert (out / "frame_empty.svg").is_file()

    def test_malformed_frame(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"curves": []}', encoding="utf-8")
        assert main(["render", str(bad), "--out", str(tmp_path)]) == 1


class TestParser:
    def test_command_required(self):
        with pytest.raises(SystemExit):
            main([])

    def test_unknown_case(self):
        with pytest.raises(SystemExit):
            main(["verify", "--case", "c"])
