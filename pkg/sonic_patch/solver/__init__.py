"""Characteristic marching of the hodograph system and sonic-line closure."""

from sonic_patch.solver.closure import close_sonic_line
from sonic_patch.solver.diagnostics import DiagnosticsReport, diagnostics
from sonic_patch.solver.kernel import rhs_minus, rhs_plus, transport_rhs
from sonic_patch.solver.march import march
from sonic_patch.solver.mesh import CharMesh, build_mesh
from sonic_patch.solver.solution import (
    BoundViolation,
    ClosureSummary,
    HodographSolution,
    SonicTrace,
)

__all__ = [
    "BoundViolation",
    "CharMesh",
    "ClosureSummary",
    "DiagnosticsReport",
    "HodographSolution",
    "SonicTrace",
    "build_mesh",
    "close_sonic_line",
    "diagnostics",
    "march",
    "rhs_minus",
    "rhs_plus",
    "transport_rhs",
]
