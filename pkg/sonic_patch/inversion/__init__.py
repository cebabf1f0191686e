"""Inversion of the hodograph solution to the physical plane."""

from sonic_patch.inversion.coefficients import f_coefficients
from sonic_patch.inversion.curves import (
    CurveSet,
    Polyline,
    de_slope_defect,
    extract_curves,
    pd_gradient_holder,
)
from sonic_patch.inversion.invariants import InvariantReport, check_invariants
from sonic_patch.inversion.patch import (
    GradientFields,
    PhysicalPatch,
    physical_gradients,
    reconstruct,
)
from sonic_patch.inversion.residual import ResidualReport, residual_euler

__all__ = [
    "CurveSet",
    "GradientFields",
    "InvariantReport",
    "PhysicalPatch",
    "Polyline",
    "ResidualReport",
    "check_invariants",
    "de_slope_defect",
    "extract_curves",
    "f_coefficients",
    "pd_gradient_holder",
    "physical_gradients",
    "reconstruct",
    "residual_euler",
]
