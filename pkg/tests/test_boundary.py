"""Tests for boundary data: presets, admissibility, hodograph trace, region and tables."""

import math
from dataclasses import replace

import numpy as np
import pytest

from sonic_patch.auto_import import ensure_registered
from sonic_patch.boundary import (
    boundary_lookup,
    check_admissibility,
    compute_trace,
    load_tables,
    region_corners,
)
from sonic_patch.errors import ConfigError, DomainError, GeometryError
from sonic_patch.gas import GasParams, char_shift_s
from sonic_patch.registry import get_preset, list_presets

ensure_registered()


@pytest.fixture(scope="module")
def gas():
    return GasParams(gamma=1.4, bernoulli=6.0)


@pytest.fixture(scope="module")
def reference_spec():
    return get_preset("reference").build()


@pytest.fixture(scope="module")
def reference_trace(reference_spec, gas):
    return compute_trace(reference_spec, gas)


class TestPresets:
    """Tests for the closed-form boundary presets."""

    def test_reference_values_at_sonic_point(self, reference_spec):
        """phi'(x1) = 1, phi''(x1) = -0.4 and varpi_hat'(x1) = -0.5."""
        assert float(reference_spec.dphi(0.0)) == pytest.approx(1.0)
        assert float(reference_spec.d2phi(0.0)) == pytest.approx(-0.4)
        assert float(reference_spec.varpi_hat(0.0)) == pytest.approx(1.0)
        assert float(reference_spec.dvarpi_hat(0.0)) == pytest.approx(-0.5)

    def test_build_records_name_and_params(self, reference_spec):
        """Built specs should carry the preset id and merged parameters."""
        assert reference_spec.name == "reference"
        assert reference_spec.params["x2"] == pytest.approx(0.12)

    def test_override_parameter(self):
        """Keyword overrides should replace defaults."""
        spec = get_preset("reference").build(x2=0.1)
        assert spec.x2 == pytest.approx(0.1)

    def test_unknown_parameter_rejected(self):
        """Unknown parameters should raise ValueError."""
        with pytest.raises(ValueError, match="Unknown parameters"):
            get_preset("reference").build(bogus=1.0)


class TestAdmissibility:
    """Tests for the wall hypotheses."""

    def test_reference_admissible(self, reference_spec, gas):
        """The reference wall should pass every check."""
        report = check_admissibility(reference_spec, gas)
        assert report.passed, report.failures()
        assert report.mach_form_agrees

    def test_admissible_presets_pass(self, gas):
        """Every admissible preset should pass."""
        for preset in list_presets(category="admissible"):
            report = check_admissibility(preset.build(), gas)
            assert report.passed, f"{preset.preset_id}: {report.failures()}"

    def test_counterexamples_fail_their_check(self, gas):
        """Each counterexample should fail the check it is built to violate."""
        counterexamples = list_presets(category="counterexample")
        assert counterexamples
        for preset in counterexamples:
            report = check_admissibility(preset.build(), gas)
            assert not report.passed
            assert preset.violates in report.failures(), f"{preset.preset_id}: {report.failures()}"

    def test_flat_wall_concavity_entry(self, gas):
        """A straight wall should fail concavity and report where."""
        report = check_admissibility(get_preset("flat_wall").build(), gas)
        entry = report.to_dict()["checks"]["concavity"]
        assert entry["passed"] is False
        assert entry["min_margin"] == pytest.approx(0.0)

    def test_margins_per_sample(self, reference_spec, gas):
        """Margins should be arrays over the samples."""
        report = check_admissibility(reference_spec, gas)
        assert report.margins["compatibility"].shape == (reference_spec.n_samples,)


class TestTrace:
    """Tests for the hodograph image of the wall."""

    def test_identity_defect(self, reference_trace):
        """a_hat + b_hat - 2 t d_hat should vanish to 1e-12."""
        assert reference_trace.identity_defect < 1e-12

    def test_starts_at_sonic_point(self, reference_trace):
        """The image should start at (t, r) = (0, 0)."""
        assert reference_trace.samples["t"][0] == pytest.approx(0.0, abs=1e-6)
        assert reference_trace.samples["r"][0] == 0.0

    def test_corner_values(self, reference_trace):
        """t0 = sqrt(1 - 0.94^2) and r0 = pi/4 - arctan(0.952)."""
        assert reference_trace.t0 == pytest.approx(math.sqrt(1.0 - 0.94**2), rel=1e-12)
        assert reference_trace.r0 == pytest.approx(math.pi / 4 - math.atan(0.952), rel=1e-12)
        assert reference_trace.theta_hat_1 == pytest.approx(math.pi / 4)

    def test_monotone_image(self, reference_trace):
        """t and r should increase strictly along the wall."""
        assert np.all(np.diff(reference_trace.samples["t"]) > 0.0)
        assert np.all(np.diff(reference_trace.samples["r"]) > 0.0)

    def test_signs_and_bounds(self, reference_trace):
        """a_hat > 0 > b_hat, d_hat and 0 < m_hat0 <= M_hat0."""
        s = reference_trace.samples
        assert np.all(s["a_hat"] > 0.0)
        assert np.all(s["b_hat"] < 0.0)
        assert np.all(s["d_hat"] < 0.0)
        assert 0.0 < reference_trace.m_hat0 <= reference_trace.M_hat0
        m0_bar, M0_bar = reference_trace.bar_bounds
        assert 0.0 < m0_bar <= M0_bar

    def test_foot_at_t_inverts_t(self, reference_trace):
        """foot_at_t should return the wall point with the requested t."""
        x = reference_trace.foot_at_t(0.2)
        assert float(reference_trace.data_at(x)["t"]) == pytest.approx(0.2, abs=1e-12)

    def test_lookup_at_sample(self, reference_trace):
        """Lookup at a sample r should reproduce the sampled values."""
        i = 200
        values = boundary_lookup(reference_trace, float(reference_trace.samples["r"][i]))
        assert values.t == pytest.approx(reference_trace.samples["t"][i], rel=1e-10)
        assert values.a_bar == pytest.approx(reference_trace.samples["a_bar"][i], rel=1e-10)
        assert values.x_hat == pytest.approx(reference_trace.samples["x"][i], rel=1e-10)

    def test_lookup_outside_rejected(self, reference_trace):
        """r outside [0, r0] should raise DomainError."""
        with pytest.raises(DomainError):
            boundary_lookup(reference_trace, reference_trace.r0 * 1.5)


class TestRegion:
    """Tests for the corners of the hodograph region."""

    def test_r_star(self, reference_trace, gas):
        """r_star should be r0 - s(t0) and positive."""
        geometry = region_corners(reference_trace, gas)
        assert geometry.r_star == pytest.approx(reference_trace.r0 - char_shift_s(reference_trace.t0, gas))
        assert geometry.r_star > 0.0

    def test_r_check_endpoints(self, reference_trace, gas):
        """r_check should pass through E' and D'."""
        geometry = region_corners(reference_trace, gas)
        assert geometry.r_check(geometry.t0) == pytest.approx(geometry.r0, abs=1e-11)
        assert geometry.r_check(0.0) == pytest.approx(geometry.r_star, abs=1e-12)

    def test_contains(self, reference_trace, gas):
        """Points between the wall image and r_check belong to the region."""
        geometry = region_corners(reference_trace, gas)
        t = 0.5 * geometry.t0
        inside = 0.5 * (reference_trace.r_tilde(t) + geometry.r_check(t))
        assert geometry.contains(t, inside, reference_trace)
        assert not geometry.contains(t, geometry.r_check(t) + 1e-3, reference_trace)

    def test_contains_within_tolerance_of_sonic_line(self, reference_trace, gas):
        """t just below 0 is clamped onto the sonic line instead of raising."""
        geometry = region_corners(reference_trace, gas)
        assert geometry.contains(-1e-13, geometry.r_star, reference_trace)
        assert not geometry.contains(-1e-6, geometry.r_star, reference_trace)

    def test_degenerate_region_rejected(self, reference_trace, gas):
        """A wall image ending below s(t0) should raise GeometryError."""
        trace = replace(reference_trace, r0=1e-4)
        assert trace.r0 < char_shift_s(trace.t0, gas)
        with pytest.raises(GeometryError, match="r\\*"):
            region_corners(trace, gas)


class TestTables:
    """Tests for sampled boundary input."""

    def _write(self, tmp_path, n=25, x2=0.12):
        x = np.linspace(0.0, x2, n)
        np.savetxt(tmp_path / "mach.txt", np.column_stack([x, 1.0 - 0.5 * x]))
        np.savetxt(
            tmp_path / "wall.txt", np.column_stack([x, 1.0 - 0.4 * x, np.full_like(x, -0.4)])
        )
        return tmp_path / "mach.txt", tmp_path / "wall.txt"

    def test_tables_reproduce_reference(self, tmp_path, gas, reference_trace):
        """Linear tables should reproduce the reference trace."""
        mach, wall = self._write(tmp_path)
        spec = load_tables(mach, wall, n_samples=401)
        trace = compute_trace(spec, gas)
        assert trace.t0 == pytest.approx(reference_trace.t0, rel=1e-10)
        assert trace.r0 == pytest.approx(reference_trace.r0, rel=1e-10)

    def test_missing_table(self, tmp_path):
        """A missing table should raise FileNotFoundError."""
        mach, _ = self._write(tmp_path)
        with pytest.raises(FileNotFoundError):
            load_tables(mach, tmp_path / "absent.txt")

    def test_mismatched_intervals(self, tmp_path):
        """Tables over different intervals should raise ConfigError."""
        mach, _ = self._write(tmp_path)
        x = np.linspace(0.0, 0.1, 10)
        np.savetxt(tmp_path / "short.txt", np.column_stack([x, 1.0 - 0.4 * x, np.full_like(x, -0.4)]))
        with pytest.raises(ConfigError, match="different intervals"):
            load_tables(mach, tmp_path / "short.txt")

    def test_wrong_column_count(self, tmp_path):
        """A wall table with two columns should raise ConfigError."""
        mach, _ = self._write(tmp_path)
        with pytest.raises(ConfigError, match="expected 3 columns"):
            load_tables(mach, mach)
