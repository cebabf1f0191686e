"""Serialization of run outputs."""

from sonic_patch.io.writers import (
    NODE_COLUMNS,
    REPORT_SCHEMA,
    SUMMARY_SCHEMA,
    node_columns,
    read_csv,
    sanitize,
    validate_report,
    write_csv,
    write_json,
    write_solution,
)

__all__ = [
    "NODE_COLUMNS",
    "REPORT_SCHEMA",
    "SUMMARY_SCHEMA",
    "node_columns",
    "read_csv",
    "sanitize",
    "validate_report",
    "write_csv",
    "write_json",
    "write_solution",
]
