from __future__ import annotations

"""End-to-end run of one patch: boundary data to physical curves and reports.

`solve_patch` chains the stages in order:

    compute_trace -> region_corners -> build_mesh -> march -> close_sonic_line
    -> diagnostics -> reconstruct -> physical_gradients -> extract_curves
    -> residual_euler -> check_invariants

Exceptions from the stages propagate unchanged; admissibility and invariant failures are
report entries on the returned PatchRun.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, replace
from typing import Any

from sonic_patch.auto_import import ensure_registered
from sonic_patch.boundary.region import RegionGeometry, region_corners
from sonic_patch.boundary.spec import BoundarySpec
from sonic_patch.boundary.tables import load_tables
from sonic_patch.boundary.trace import BoundaryTrace, compute_trace
from sonic_patch.config import DEFAULT_RESIDUAL_T_FLOOR, BoundaryConfig, SolverParams
from sonic_patch.errors import ConfigError
from sonic_patch.gas import GasParams
from sonic_patch.inversion.curves import CurveSet, de_slope_defect, extract_curves, pd_gradient_holder
from sonic_patch.inversion.invariants import InvariantReport, check_invariants
from sonic_patch.inversion.patch import PhysicalPatch, physical_gradients, reconstruct
from sonic_patch.inversion.residual import ResidualReport, residual_euler
from sonic_patch.registry import get_preset
from sonic_patch.solver.closure import close_sonic_line
from sonic_patch.solver.diagnostics import DiagnosticsReport, diagnostics
from sonic_patch.solver.march import march
from sonic_patch.solver.mesh import build_mesh
from sonic_patch.solver.solution import HodographSolution
from sonic_patch.verify.holder import HolderFit

logger = logging.getLogger(__name__)

# Closed-form residuals cancel identically; anything above this is a defect
CLOSED_FORM_TOL = 1e-10

# Test hook run between closure and inversion; may return an altered solution
SolutionHook = Callable[[HodographSolution], HodographSolution]


def build_boundary(config: BoundaryConfig) -> BoundarySpec:
    """Boundary data from a registered preset or from a pair of tables.

    Raises:
        ConfigError: If the preset is unknown, its parameters are rejected, or a table is
            missing or malformed.
    """
    if config.uses_tables:
        assert config.varpi_table is not None and config.wall_table is not None
        try:
            return load_tables(config.varpi_table, config.wall_table, config.n_samples, config.y1)
        except FileNotFoundError as exc:
            raise ConfigError(f"boundary table not found: {exc.filename or exc}") from exc

    ensure_registered()
    assert config.preset is not None
    try:
        return get_preset(config.preset).build(**config.params)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"preset '{config.preset}': {exc}") from exc


@dataclass
class PatchRun:
    """Every stage output of one solve.

    Attributes:
        spec: Boundary data.
        gas: Gas constants.
        trace: Hodograph image of the wall.
        geometry: Region corners.
        solution: Closed hodograph solution.
        diagnostics: Bound constants and hodograph-side fits.
        patch: Physical nodes with gradients.
        curves: PE, PD and DE.
        residuals: Closed-form and discrete flow residuals.
        invariants: Geometry and monotonicity checks.
        pd_holder: Hoelder fits of the gradient components along PD.
        de_slope_defect: Secant slope of DE against tan(beta).
    """

    spec: BoundarySpec
    gas: GasParams
    trace: BoundaryTrace
    geometry: RegionGeometry
    solution: HodographSolution
    diagnostics: DiagnosticsReport
    patch: PhysicalPatch
    curves: CurveSet
    residuals: ResidualReport
    invariants: InvariantReport
    pd_holder: dict[str, HolderFit]
    de_slope_defect: float

    def failures(self) -> list[str]:
        """Names of failed invariant checks, plus `closed_form_residual` when it is not zero."""
        failed = list(self.invariants.failures())
        if not self.residuals.closed_form < CLOSED_FORM_TOL:
            failed.append("closed_form_residual")
        return failed

    @property
    def passed(self) -> bool:
        return not self.failures()

    def report(self) -> dict[str, Any]:
        """Report sections for diagnostics.json (config_hash and orders are added by the caller)."""
        diag = self.diagnostics.to_dict()
        mesh = self.solution.mesh
        return {
            "constants": diag["constants"],
            "bounds": diag["bounds"],
            "rs": diag["rs"],
            "w_bar": diag["w_bar"],
            "lambda_bracket": diag["lambda_bracket"],
            "closure": diag["closure"],
            "holder": {
                "hodograph": diag["holder"],
                "physical": {name: fit.to_dict() for name, fit in self.pd_holder.items()},
            },
            "residuals": self.residuals.to_dict(),
            "gradients": self.patch.gradients.summary() if self.patch.gradients is not None else {},
            "invariants": self.invariants.to_dict(),
            "curves": {
                "corner_d": list(self.curves.corner_d),
                "n_pe": len(self.curves.pe),
                "n_pd": len(self.curves.pd),
                "n_de": len(self.curves.de),
                "de_slope_defect": self.de_slope_defect,
                "monotonicity": {name: flag.to_dict() for name, flag in self.curves.flags.items()},
            },
            "mesh": {
                "dt": mesh.dt,
                "t_min": mesh.t_min,
                "t_last": float(mesh.t[mesh.last_marched]),
                "n_levels": mesh.n_levels,
                "n_nodes": mesh.n_nodes,
            },
            "passed": self.passed,
            "failures": self.failures(),
        }


def solve_patch(
    spec: BoundarySpec,
    gas: GasParams,
    params: SolverParams,
    residual_t_floor: float = DEFAULT_RESIDUAL_T_FLOOR,
    post_march_hook: SolutionHook | None = None,
) -> PatchRun:
    """Solve the patch for admissible boundary data.

    Raises:
        TraceError, GeometryError, MeshError: If the trace, region or mesh cannot be built.
        MarchError, InversionError, QuadratureError: If a stage produces non-finite values.
    """
    trace = compute_trace(spec, gas)
    geometry = region_corners(trace, gas)
    mesh = build_mesh(trace, geometry, params)
    solution = close_sonic_line(march(mesh, trace, gas, params), trace, gas)
    if post_march_hook is not None:
        solution = post_march_hook(solution)
    report = diagnostics(solution, trace, gas)

    patch = reconstruct(solution, trace, gas)
    patch = replace(patch, gradients=physical_gradients(solution, patch, gas))
    curves = extract_curves(patch)
    residuals = residual_euler(patch, solution, gas, t_floor=residual_t_floor)
    invariants = check_invariants(patch, solution, curves, trace, gas)

    run = PatchRun(
        spec=spec,
        gas=gas,
        trace=trace,
        geometry=geometry,
        solution=solution,
        diagnostics=report,
        patch=patch,
        curves=curves,
        residuals=residuals,
        invariants=invariants,
        pd_holder=pd_gradient_holder(patch),
        de_slope_defect=de_slope_defect(patch),
    )
    logger.info(
        f"Solved '{spec.name}': D = ({run.curves.corner_d[0]:.6f}, {run.curves.corner_d[1]:.6f}), "
        f"{'all invariants hold' if run.passed else 'failing: ' + ', '.join(run.failures())}"
    )
    return run
