"""End-to-end tests for the `sonic-patch` command and its exit codes."""

import json
from dataclasses import replace
from pathlib import Path

import pytest

from sonic_patch.cli import build_parser, main
from sonic_patch.errors import ExitCode
from sonic_patch.io import read_csv

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def _config(tmp_path, boundary='preset = "reference"', solver="dt = 4e-3", checks='["oracle"]'):
    path = tmp_path / "run.toml"
    path.write_text(
        f"[boundary]\n{boundary}\n\n"
        f"[solver]\n{solver}\n\n"
        f'[output]\ndirectory = "{(tmp_path / "out").as_posix()}"\n\n'
        f"[verify]\nchecks = {checks}\noracle_samples = 200\n"
    )
    return str(path)


class TestParser:
    """Tests for argument parsing."""

    def test_command_required(self):
        """A missing subcommand should exit with usage."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_converge_options(self):
        """converge should accept --refine and --dt."""
        args = build_parser().parse_args(["converge", "--config", "x.toml", "--refine", "4", "--dt", "8e-3"])
        assert args.refine == 4
        assert args.dt == pytest.approx(8e-3)

    def test_check_has_no_dt(self):
        """check should not accept --dt."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["check", "--config", "x.toml", "--dt", "1e-3"])


class TestCheck:
    """Tests for `sonic-patch check`."""

    def test_reference_admissible(self, tmp_path):
        """The reference wall should exit 0 and write admissibility.json."""
        assert main(["check", "--config", _config(tmp_path)]) == ExitCode.OK
        report = json.loads((tmp_path / "out" / "admissibility.json").read_text())
        assert report["command"] == "check"
        assert report["passed"] is True
        assert report["admissibility"]["failures"] == []

    def test_flat_wall_inadmissible(self, tmp_path, capsys):
        """A straight wall should exit 2 and name the concavity check."""
        code = main(["check", "--config", _config(tmp_path, boundary='preset = "flat_wall"')])
        assert code == ExitCode.ADMISSIBILITY
        assert "concavity" in capsys.readouterr().out

    def test_missing_table(self, tmp_path):
        """A missing boundary table should exit 1."""
        boundary = 'varpi_table = "absent_mach.txt"\nwall_table = "absent_wall.txt"'
        assert main(["check", "--config", _config(tmp_path, boundary=boundary)]) == ExitCode.CONFIG

    def test_unknown_preset(self, tmp_path):
        """An unknown preset should exit 1."""
        assert main(["check", "--config", _config(tmp_path, boundary='preset = "nope"')]) == ExitCode.CONFIG

    def test_invalid_config(self, tmp_path):
        """A schema violation should exit 1."""
        assert main(["check", "--config", _config(tmp_path, solver="dt = -1.0")]) == ExitCode.CONFIG

    def test_missing_config(self, tmp_path):
        """A missing config file should exit 1."""
        assert main(["check", "--config", str(tmp_path / "absent.toml")]) == ExitCode.CONFIG


class TestSolve:
    """Tests for `sonic-patch solve`."""

    def test_reference_solve(self, tmp_path):
        """Solving the reference wall should exit 0 and write every output."""
        config = _config(tmp_path)
        assert main(["solve", "--config", config]) == ExitCode.OK
        out = tmp_path / "out"
        for name in ("nodes.csv", "pe.csv", "pd.csv", "de.csv", "diagnostics.json"):
            assert (out / name).is_file(), name

        report = json.loads((out / "diagnostics.json").read_text())
        assert report["passed"] is True
        config_hash, nodes = read_csv(out / "nodes.csv")
        assert config_hash == report["config_hash"]
        assert nodes["jacobian"].size == report["mesh"]["n_nodes"]
        assert list(nodes) == ["char_id", "t", "r", "u_bar", "v_bar", "w_bar", "x", "y", "theta", "varpi", "jacobian"]

    def test_out_override(self, tmp_path):
        """--out should redirect the outputs."""
        target = tmp_path / "elsewhere"
        assert main(["solve", "--config", _config(tmp_path), "--out", str(target)]) == ExitCode.OK
        assert (target / "diagnostics.json").is_file()

    def test_inadmissible_solve(self, tmp_path):
        """Solving inadmissible data should exit 2 without writing nodes."""
        code = main(["solve", "--config", _config(tmp_path, boundary='preset = "late_sonic"')])
        assert code == ExitCode.ADMISSIBILITY
        assert not (tmp_path / "out" / "nodes.csv").exists()

    def test_step_too_large(self, tmp_path):
        """A step larger than the region should exit 3."""
        assert main(["solve", "--config", _config(tmp_path), "--dt", "1.0"]) == ExitCode.SOLVER

    def test_dt_above_t_min(self, tmp_path):
        """dt > t_min on the command line should exit 1."""
        code = main(["solve", "--config", _config(tmp_path), "--dt", "4e-3", "--t-min", "2e-3"])
        assert code == ExitCode.CONFIG

    def test_characteristic_count_above_t_min(self, tmp_path):
        """n_characteristics giving dt > t_min should exit 1, not raise."""
        solver = "n_characteristics = 5\nt_min = 0.003"
        assert main(["solve", "--config", _config(tmp_path, solver=solver)]) == ExitCode.CONFIG

    def test_sign_flip_detected(self, tmp_path):
        """Negating U_bar after marching should break the Jacobian sign and exit 4."""

        def flip(solution):
            return replace(solution, u_bar=-solution.u_bar)

        code = main(["solve", "--config", _config(tmp_path)], post_march_hook=flip)
        assert code == ExitCode.INVARIANT
        report = json.loads((tmp_path / "out" / "diagnostics.json").read_text())
        assert "jacobian_positive" in report["failures"]


class TestVerify:
    """Tests for `sonic-patch verify`."""

    def test_oracle_only(self, tmp_path):
        """An oracle-only verify should exit 0 and write verify.json."""
        assert main(["verify", "--config", _config(tmp_path), "--seed", "3"]) == ExitCode.OK
        report = json.loads((tmp_path / "out" / "verify.json").read_text())
        assert report["command"] == "verify"
        assert report["failures"] == []
        assert {entry["family"] for entry in report["oracle"]} == {"vortex", "source"}

    def test_reference_config_passes(self, tmp_path):
        """The shipped reference config should pass every verify check."""
        out = tmp_path / "ref"
        assert main(["verify", "--config", str(CONFIG_DIR / "reference.toml"), "--out", str(out)]) == ExitCode.OK
        report = json.loads((out / "verify.json").read_text())
        assert report["failures"] == []
        assert 3.5 <= report["manufactured"]["ratio"] <= 4.5
        assert report["manufactured"]["passed"] is True
        assert set(report["holder"]) == {"hodograph", "physical"}


class TestConverge:
    """Tests for `sonic-patch converge`."""

    def test_reference_orders(self, tmp_path, capsys):
        """Three levels on the reference wall should exit 0 and print each order."""
        assert main(["converge", "--config", _config(tmp_path), "--refine", "3"]) == ExitCode.OK
        report = json.loads((tmp_path / "out" / "convergence.json").read_text())
        assert report["command"] == "converge"
        assert report["passed"] is True
        assert "order closure_defect" in capsys.readouterr().out


class TestEntrypoint:
    """Tests for the one-call `solve` API."""

    def test_solve_preset(self):
        """solve() should build the preset and run every stage."""
        from sonic_patch_solver import solve

        run = solve(preset="rational_mach", dt=4e-3)
        assert run.spec.name == "rational_mach"
        assert run.passed, run.failures()

    def test_unknown_preset_parameter(self):
        """Unknown preset parameters should surface as a configuration error."""
        from sonic_patch.errors import ConfigError
        from sonic_patch_solver import solve

        with pytest.raises(ConfigError):
            solve(dt=4e-3, bogus=1.0)
