"""Boundary data: wall description, admissibility, hodograph trace and region."""

from sonic_patch.boundary.region import RegionGeometry, region_corners
from sonic_patch.boundary.spec import BoundarySpec
from sonic_patch.boundary.tables import load_tables
from sonic_patch.boundary.trace import (
    AdmissibilityReport,
    BoundaryTrace,
    BoundaryValues,
    boundary_lookup,
    check_admissibility,
    compute_trace,
)

__all__ = [
    "AdmissibilityReport",
    "BoundarySpec",
    "BoundaryTrace",
    "BoundaryValues",
    "RegionGeometry",
    "boundary_lookup",
    "check_admissibility",
    "compute_trace",
    "load_tables",
    "region_corners",
]
