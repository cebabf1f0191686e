"""Tests for CSV tables and JSON reports."""

import json
import math

import numpy as np
import pytest

from sonic_patch.io import (
    REPORT_SCHEMA,
    SUMMARY_SCHEMA,
    read_csv,
    sanitize,
    validate_report,
    write_csv,
    write_json,
)

HASH = "0123456789abcdef"


class TestSanitize:
    """Tests for JSON sanitizing."""

    def test_numpy_and_non_finite(self):
        """numpy scalars become Python values; nan and inf become None."""
        clean = sanitize(
            {"a": np.float64(1.5), "b": np.int64(3), "c": np.bool_(True), "d": math.nan, "e": (1.0, np.inf)}
        )
        assert clean == {"a": 1.5, "b": 3, "c": True, "d": None, "e": [1.0, None]}
        assert type(clean["b"]) is int

    def test_arrays_and_nested_keys(self):
        """Arrays become lists and keys become strings."""
        assert sanitize({1: np.array([1.0, np.nan])}) == {"1": [1.0, None]}


class TestJson:
    """Tests for validated JSON output."""

    def test_summary_written_sorted(self, tmp_path):
        """A valid summary should be written with sorted keys."""
        path = write_json(tmp_path / "s.json", {"passed": True, "config_hash": HASH, "command": "check"})
        text = path.read_text()
        assert text.index('"command"') < text.index('"config_hash"') < text.index('"passed"')
        assert json.loads(text)["passed"] is True

    def test_summary_schema_errors(self, tmp_path):
        """A bad hash and an unknown command should both be reported."""
        errors = validate_report({"config_hash": "xyz", "command": "run", "passed": True}, SUMMARY_SCHEMA)
        assert len(errors) == 2
        with pytest.raises(ValueError, match="does not match its schema"):
            write_json(tmp_path / "bad.json", {"config_hash": HASH, "command": "check"})
        assert not (tmp_path / "bad.json").exists()

    def test_report_requires_sections(self):
        """A diagnostics report without its sections should fail validation."""
        errors = validate_report({"config_hash": HASH}, REPORT_SCHEMA)
        assert any("constants" in error for error in errors)
        assert any("invariants" in error for error in errors)


class TestCsv:
    """Tests for CSV tables."""

    def test_header_and_precision(self, tmp_path):
        """Floats should survive at full precision under the hash line."""
        values = np.array([1.0 / 3.0, math.pi, 1e-17])
        path = write_csv(tmp_path / "t.csv", {"id": np.arange(3), "value": values}, HASH)
        lines = path.read_text().splitlines()
        assert lines[0] == f"# config_hash: {HASH}"
        assert lines[1] == "id,value"
        assert lines[2].startswith("0,")

        config_hash, columns = read_csv(path)
        assert config_hash == HASH
        assert np.array_equal(columns["value"], values)

    def test_unequal_columns(self, tmp_path):
        """Columns of different lengths should be rejected."""
        with pytest.raises(ValueError, match="differ in length"):
            write_csv(tmp_path / "t.csv", {"a": [1.0, 2.0], "b": [1.0]}, HASH)
