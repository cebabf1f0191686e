from __future__ import annotations

"""CSV tables and JSON reports for a run.

Every CSV starts with a `# config_hash: <hash>` line followed by the column header;
floats are written with repr precision so a re-read reproduces them exactly. Reports are
sanitized (numpy scalars to Python, nan and inf to null), validated against a Draft 7
schema and written with sorted keys.
"""

import csv
import json
import logging
import math
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from jsonschema import Draft7Validator

from sonic_patch.pipeline import PatchRun

logger = logging.getLogger(__name__)

NODE_COLUMNS = ("char_id", "t", "r", "u_bar", "v_bar", "w_bar", "x", "y", "theta", "varpi", "jacobian")

_SECTION = {"type": "object"}

# diagnostics.json written by `sonic-patch solve`
REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "config_hash": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
        "constants": {
            "type": "object",
            "properties": {
                "m0_bar": {"type": "number", "exclusiveMinimum": 0},
                "M0_bar": {"type": "number", "exclusiveMinimum": 0},
                "k0": {"type": "number", "exclusiveMinimum": 0},
                "eps0": {"type": "number", "exclusiveMinimum": 0},
                "t0": {"type": "number"},
                "r0": {"type": "number"},
                "r_star": {"type": "number"},
            },
            "required": ["m0_bar", "M0_bar", "k0", "eps0", "t0", "r0", "r_star"],
        },
        "bounds": {
            "type": "object",
            "properties": {
                "interval": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                "violations": {"type": "array"},
            },
            "required": ["interval", "violations"],
        },
        "closure": _SECTION,
        "holder": {
            "type": "object",
            "properties": {"hodograph": _SECTION, "physical": _SECTION},
            "required": ["hodograph", "physical"],
        },
        "residuals": _SECTION,
        "invariants": {
            "type": "object",
            "properties": {"passed": {"type": "boolean"}, "checks": _SECTION},
            "required": ["passed", "checks"],
        },
        "orders": _SECTION,
    },
    "required": ["config_hash", "constants", "bounds", "closure", "holder", "residuals", "invariants"],
}

# admissibility.json, verify.json and convergence.json
SUMMARY_SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "config_hash": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
        "command": {"enum": ["check", "solve", "verify", "converge"]},
        "passed": {"type": "boolean"},
    },
    "required": ["config_hash", "command", "passed"],
}


def sanitize(value: Any) -> Any:
    """JSON-safe copy: numpy to Python, tuples to lists, non-finite floats to None."""
    if isinstance(value, Mapping):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return [sanitize(v) for v in value.tolist()]
    if isinstance(value, Sequence) and not isinstance(value, str):
        return [sanitize(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        return float(value) if math.isfinite(value) else None
    return value


def validate_report(report: dict[str, Any], schema: dict[str, Any] = REPORT_SCHEMA) -> list[str]:
    """Validate a sanitized report.

    Returns:
        List of "path: message" strings; empty if valid.
    """
    validator = Draft7Validator(schema)
    errors = []
    for error in validator.iter_errors(report):
        path = ".".join(str(p) for p in error.path) if error.path else "root"
        errors.append(f"{path}: {error.message}")
    return errors


def write_json(
    path: str | Path, report: dict[str, Any], schema: dict[str, Any] = SUMMARY_SCHEMA
) -> Path:
    """Sanitize, validate and write a report.

    Raises:
        ValueError: If the report does not match the schema.
    """
    path = Path(path)
    clean = sanitize(report)
    errors = validate_report(clean, schema)
    if errors:
        raise ValueError(f"report {path.name} does not match its schema: {'; '.join(errors)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(clean, indent=2, sort_keys=True) + "\n")
    logger.debug(f"Wrote {path}")
    return path


def _format(value: Any) -> str:
    if isinstance(value, int | np.integer):
        return str(int(value))
    return repr(float(value))


def write_csv(
    path: str | Path, columns: Mapping[str, Sequence[Any] | np.ndarray], config_hash: str
) -> Path:
    """Write equal-length columns under a config-hash line and a header row."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[name]) for name in names]
    n_rows = {a.shape[0] for a in arrays}
    if len(n_rows) != 1:
        raise ValueError(f"columns of {path.name} differ in length: {sorted(n_rows)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# config_hash: {config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in zip(*arrays):
            writer.writerow([_format(v) for v in row])
    logger.debug(f"Wrote {path} ({n_rows.pop()} rows)")
    return path


def node_columns(run: PatchRun) -> dict[str, np.ndarray]:
    """One row per mesh node, level by level, characteristics in index order."""
    sol, patch = run.solution, run.patch
    rows, cols = np.tril_indices(sol.mesh.n_levels)
    w_bar = np.where(np.isfinite(sol.w_bar), sol.w_bar, sol.w_transport)
    fields = {
        "char_id": cols,
        "t": patch.t,
        "r": patch.r,
        "u_bar": sol.u_bar,
        "v_bar": sol.v_bar,
        "w_bar": w_bar,
        "x": patch.x,
        "y": patch.y,
        "theta": patch.theta,
        "varpi": patch.varpi,
        "jacobian": patch.jacobian,
    }
    return {
        name: fields[name] if name == "char_id" else np.asarray(fields[name])[rows, cols]
        for name in NODE_COLUMNS
    }


def write_solution(
    run: PatchRun, directory: str | Path, config_hash: str, formats: Sequence[str]
) -> list[Path]:
    """Write nodes.csv, pe.csv, pd.csv, de.csv and diagnostics.json as selected by `formats`."""
    directory = Path(directory)
    written = []
    if "csv" in formats:
        written.append(write_csv(directory / "nodes.csv", node_columns(run), config_hash))
        for name in ("pe", "pd", "de"):
            curve = getattr(run.curves, name)
            written.append(write_csv(directory / f"{name}.csv", curve.columns(), config_hash))
    if "json" in formats:
        report = {"config_hash": config_hash, "command": "solve", **run.report()}
        written.append(write_json(directory / "diagnostics.json", report, REPORT_SCHEMA))
    logger.info(f"Wrote {len(written)} file(s) to {directory}")
    return written


def read_csv(path: str | Path) -> tuple[str, dict[str, np.ndarray]]:
    """Read a table written by `write_csv`.

    Returns:
        (config_hash, column name -> float array).
    """
    with Path(path).open(newline="") as fh:
        first = fh.readline().strip()
        config_hash = first.removeprefix("# config_hash:").strip()
        reader = csv.reader(fh)
        header = next(reader)
        rows = [list(map(float, row)) for row in reader]
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(header))
    return config_hash, {name: data[:, i] for i, name in enumerate(header)}
