"""Tests for run configuration loading, validation and overrides."""

from pathlib import Path

import pytest

from sonic_patch.config import (
    RunConfig,
    SolverParams,
    apply_overrides,
    config_from_dict,
    load_config,
    validate_config_dict,
)
from sonic_patch.errors import ConfigError

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


class TestLoadConfig:
    """Tests for reading TOML configurations."""

    def test_reference_config(self):
        """The shipped reference config should load with its values."""
        config = load_config(CONFIG_DIR / "reference.toml")
        assert config.gas.gamma == pytest.approx(1.4)
        assert config.boundary.preset == "reference"
        assert config.solver.dt == pytest.approx(2e-3)
        assert "manufactured" in config.verify.checks

    def test_tables_config_resolves_paths(self):
        """Table paths should resolve against the config directory."""
        config = load_config(CONFIG_DIR / "tables.toml")
        assert config.boundary.uses_tables
        assert Path(config.boundary.varpi_table).is_file()
        assert Path(config.boundary.wall_table).is_file()

    def test_missing_file(self, tmp_path):
        """A missing config file should raise ConfigError."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.toml")

    def test_bad_toml(self, tmp_path):
        """Malformed TOML should raise ConfigError."""
        path = tmp_path / "bad.toml"
        path.write_text("[solver\ndt = ")
        with pytest.raises(ConfigError):
            load_config(path)


class TestValidation:
    """Tests for schema and range checks."""

    def test_empty_mapping_uses_defaults(self):
        """An empty mapping should give the reference defaults."""
        config = config_from_dict({})
        assert config.boundary.preset == "reference"
        assert config.solver.corrector_iters == 2
        assert config.output.formats == ["csv", "json"]

    def test_unknown_key_reported_with_path(self):
        """Unknown keys should be reported with their block."""
        errors = validate_config_dict({"solver": {"dtt": 1e-3}})
        assert errors
        assert errors[0].startswith("solver")

    @pytest.mark.parametrize(
        "raw",
        [
            {"gas": {"gamma": 1.0}},
            {"solver": {"dt": -1e-3}},
            {"solver": {"interp_order": 2}},
            {"verify": {"refine": 2}},
            {"verify": {"checks": ["everything"]}},
            {"output": {"formats": ["xml"]}},
        ],
    )
    def test_schema_errors(self, raw):
        """Out-of-range values should raise ConfigError."""
        with pytest.raises(ConfigError, match="invalid configuration"):
            config_from_dict(raw)

    def test_dt_exceeding_t_min(self):
        """dt > t_min should be rejected."""
        with pytest.raises(ConfigError, match="dt must not exceed t_min"):
            config_from_dict({"solver": {"dt": 2e-3, "t_min": 1e-3}})

    def test_half_table_pair(self):
        """Giving only one table should be rejected."""
        with pytest.raises(ConfigError, match="together"):
            config_from_dict({"boundary": {"varpi_table": "mach.txt"}})


class TestSolverParams:
    """Tests for the effective marching resolution."""

    def test_default_t_min(self):
        """t_min should default to max(1e-3, dt)."""
        assert SolverParams(dt=2e-3).resolve(0.34) == (2e-3, 2e-3)
        assert SolverParams(dt=5e-4).resolve(0.34) == (5e-4, 1e-3)

    def test_n_characteristics(self):
        """n_characteristics should set dt = t0 / n."""
        dt, t_min = SolverParams(dt=None, n_characteristics=100, t_min=0.01).resolve(0.5)
        assert dt == pytest.approx(5e-3)
        assert t_min == pytest.approx(0.01)

    def test_n_characteristics_above_t_min(self):
        """A count giving dt > t_min is a configuration error."""
        with pytest.raises(ConfigError, match="n_characteristics"):
            SolverParams(n_characteristics=5, t_min=0.003).resolve(0.34)

    def test_neither_dt_nor_count(self):
        """One of dt or n_characteristics is required."""
        with pytest.raises(ValueError, match="required"):
            SolverParams(dt=None)


class TestOverridesAndHash:
    """Tests for command-line overrides and the config hash."""

    def test_overrides_applied(self):
        """Overrides should replace the corresponding fields."""
        config = apply_overrides(RunConfig(), dt=1e-3, t_min=5e-3, out="elsewhere", seed=7, refine=4)
        assert config.solver.dt == pytest.approx(1e-3)
        assert config.solver.t_min == pytest.approx(5e-3)
        assert config.output.directory == "elsewhere"
        assert config.verify.seed == 7
        assert config.verify.refine == 4

    def test_dt_override_clears_count(self):
        """A dt override should take precedence over n_characteristics."""
        base = config_from_dict({"solver": {"n_characteristics": 50}})
        assert apply_overrides(base, dt=4e-3).solver.n_characteristics is None

    def test_invalid_override(self):
        """An override that breaks a range check should raise ConfigError."""
        with pytest.raises(ConfigError, match="invalid override"):
            apply_overrides(RunConfig(), refine=1)

    def test_hash_stable_and_sensitive(self):
        """Equal configs should hash equally; a changed field should change the hash."""
        a = RunConfig().config_hash()
        assert a == RunConfig().config_hash()
        assert len(a) == 16
        assert apply_overrides(RunConfig(), dt=1e-3).config_hash() != a
