from __future__ import annotations

import json
import math

import pytest

from phasorlife.cli import main
from conftest import PATTERNS_DIR


def pattern(name: str) -> str:
    return str(PATTERNS_DIR / name)


class TestRun:
    def test_dying_block_final_frame_dead(self, tmp_path, capsys):
        out = tmp_path / "frames"
        rc = main([
            "run", "--pattern", pattern("block_phase_pi.sqp"),
            "--generations", "2", "--output", str(out), "--format", "csv",
        ])
        assert rc == 0
        frames = sorted(p.name for p in out.iterdir())
        assert frames == ["gen_00000.csv", "gen_00001.csv", "gen_00002.csv"]
        last = (out / "gen_00002.csv").read_text().splitlines()[1:]
        assert all(float(line.split(",")[-1]) < 1e-6 for line in last)
        summary = capsys.readouterr().out
        assert "final total alive probability" in summary

    def test_empty_pattern_frames_identical(self, tmp_path):
        sqp = tmp_path / "empty.sqp"
        sqp.write_text("version 1\nsize 3 3\nboundary fixed\ncells\n. . .\n. . .\n. . .\n")
        out = tmp_path / "frames"
        rc = main(["run", "--pattern", str(sqp), "--generations", "10",
                   "--output", str(out), "--format", "ascii"])
        assert rc == 0
        frames = sorted(out.iterdir())
        assert len(frames) == 11
        contents = {p.read_bytes() for p in frames}
        assert len(contents) == 1

    def test_still_life_frame_100_equals_frame_0(self, tmp_path):
        out = tmp_path / "frames"
        rc = main(["run", "--pattern", pattern("block.sqp"), "--generations", "100",
                   "--output", str(out), "--format", "csv"])
        assert rc == 0
        assert (out / "gen_00100.csv").read_bytes() == (out / "gen_00000.csv").read_bytes()

    def test_identical_invocations_byte_identical(self, tmp_path):
        outs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            main(["run", "--pattern", pattern("loop.sqp"), "--generations", "3",
                  "--output", str(out), "--format", "ppm"])
            outs.append(b"".join(p.read_bytes() for p in sorted(out.iterdir())))
        assert outs[0] == outs[1]

    def test_missing_pattern_is_io_error(self, tmp_path, capsys):
        rc = main(["run", "--pattern", str(tmp_path / "nope.sqp")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_malformed_pattern_is_io_error(self, tmp_path, capsys):
        sqp = tmp_path / "bad.sqp"
        sqp.write_text("version 1\nsize 2 1\nboundary fixed\ncells\n. ?\n")
        rc = main(["run", "--pattern", str(sqp)])
        assert rc == 2

    def test_bad_flag_is_usage_error(self, capsys):
        rc = main(["run", "--pattern", pattern("block.sqp"), "--format", "jpeg"])
        assert rc == 1

    def test_negative_generations_is_usage_error(self):
        rc = main(["run", "--pattern", pattern("block.sqp"), "--generations", "-1"])
        assert rc == 1

    def test_bad_dead_threshold_is_usage_error(self):
        rc = main(["run", "--pattern", pattern("block.sqp"), "--dead-threshold", "0.9"])
        assert rc == 1


class TestAnalyze:
    def run_json(self, capsys, *args):
        rc = main(["analyze", *args])
        assert rc == 0
        return json.loads(capsys.readouterr().out)

    def test_loop_still_life(self, capsys):
        data = self.run_json(capsys, "--pattern", pattern("loop.sqp"))
        assert data["verdict"] == "still_life"

    def test_dying_block_reports_generation(self, capsys):
        data = self.run_json(capsys, "--pattern", pattern("block_phase_3pi4.sqp"))
        assert data["verdict"] == "dead"
        assert data["generation"] == 3

    def test_blinker_oscillator(self, capsys):
        data = self.run_json(capsys, "--pattern", pattern("blinker.sqp"))
        assert data["verdict"] == "oscillator"
        assert data["period"] == 2

    def test_boundary_override(self, capsys, tmp_path):
        sqp = tmp_path / "line.sqp"
        sqp.write_text("version 1\nsize 4 3\nboundary fixed\ncells\n"
                       ". . . .\n> > > >\n. . . .\n")
        fixed = self.run_json(capsys, "--pattern", str(sqp))
        torus = self.run_json(capsys, "--pattern", str(sqp), "--boundary", "torus")
        assert fixed["verdict"] != torus["verdict"] or fixed["generation"] != torus.get("generation")


class TestSweep:
    def test_block_sweep_csv(self, capsys):
        rc = main(["sweep", "--pattern", pattern("block.sqp"), "--cell", "3", "3",
                   "--phase-start", "0", "--phase-end", str(math.pi), "--steps", "64"])
        assert rc == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "phase_rad,verdict,death_generation"
        data_rows = [l for l in out[1:] if not l.startswith("#")]
        assert len(data_rows) == 64
        comment = [l for l in out if l.startswith("# critical_angle_estimate")]
        assert len(comment) == 1
        estimate = float(comment[0].split("=")[1])
        # transition sits where the in-phase neighbor sum magnitude crosses 2
        assert abs(estimate - math.acos(-0.25)) <= math.pi / 63

    def test_single_step_sweep(self, capsys):
        rc = main(["sweep", "--pattern", pattern("block.sqp"), "--cell", "3", "3",
                   "--steps", "1"])
        assert rc == 0
        out = capsys.readouterr().out.splitlines()
        assert len([l for l in out[1:] if l and not l.startswith("#")]) == 1

    def test_dead_cell_is_usage_error(self, capsys):
        rc = main(["sweep", "--pattern", pattern("block.sqp"), "--cell", "0", "0"])
        assert rc == 1

    def test_bad_range_is_usage_error(self):
        rc = main(["sweep", "--pattern", pattern("block.sqp"), "--cell", "3", "3",
                   "--phase-start", "2.0", "--phase-end", "1.0"])
        assert rc == 1


class TestOracleCheck:
    def test_glider_passes(self, capsys):
        rc = main(["oracle-check", "--pattern", pattern("glider.sqp"),
                   "--generations", "100"])
        assert rc == 0
        assert "passed" in capsys.readouterr().out

    def test_r_pentomino_passes(self):
        rc = main(["oracle-check", "--pattern", pattern("r_pentomino.sqp"),
                   "--generations", "50"])
        assert rc == 0

    def test_non_classical_token_rejected(self, tmp_path, capsys):
        sqp = tmp_path / "frac.sqp"
        sqp.write_text("version 1\nsize 2 1\nboundary fixed\ncells\n0.5@0 .\n")
        rc = main(["oracle-check", "--pattern", str(sqp)])
        assert rc == 2
        assert "non-classical token" in capsys.readouterr().err

    def test_divergence_exits_3(self, tmp_path, capsys, monkeypatch):
        # force a divergence by sabotaging the engine step
        import phasorlife.cli as cli

        def broken(g, cfg=None, **kw):
            return g

        monkeypatch.setattr(cli, "step_grid", broken)
        rc = main(["oracle-check", "--pattern", pattern("blinker.sqp"),
                   "--generations", "3"])
        assert rc == 3
        assert "divergence at generation 1" in capsys.readouterr().err


class TestHelp:
    def test_help_lists_defaults(self, capsys):
        with pytest.raises(SystemExit):
            main(["analyze", "--help"])
        text = capsys.readouterr().out
        assert "default: 200" in text
        assert "1e-06" in text
