from __future__ import annotations

"""sonic-patch - Main Entrypoint.

This module provides `solve`, the one-call API for solving a patch from a registered
preset with keyword settings.

Usage:
    from sonic_patch_solver import solve

    # Reference wall at the default resolution
    run = solve()

    # Another preset, finer marching
    run = solve(preset="rational_mach", dt=1e-3)
    print(run.curves.corner_d, run.failures())
"""

from typing import Any

from sonic_patch.config import BoundaryConfig, GasConfig, SolverParams
from sonic_patch.pipeline import PatchRun, build_boundary, solve_patch


def solve(
    preset: str = "reference",
    gamma: float = 1.4,
    bernoulli: float = 6.0,
    dt: float | None = 2e-3,
    t_min: float | None = None,
    corrector_iters: int = 2,
    interp_order: int = 3,
    n_characteristics: int | None = None,
    residual_t_floor: float = 0.05,
    **preset_params: Any,
) -> PatchRun:
    """Solve the patch for a registered preset.

    Args:
        preset: Registered preset id.
        gamma: Adiabatic index.
        bernoulli: Bernoulli constant B0.
        dt: Level spacing in t.
        t_min: Last marched level (None means max(1e-3, dt)).
        corrector_iters: Trapezoidal corrector sweeps per step.
        interp_order: 3 for cubic-spline foot interpolation, 1 for linear.
        n_characteristics: If set, dt = t0 / n_characteristics.
        residual_t_floor: Lower t limit of the discrete residual window.
        **preset_params: Overrides of the preset's default parameters.

    Returns:
        Every stage output of the solve; `failures()` lists failed invariants.

    Raises:
        ConfigError: If the preset or its parameters are invalid.
        ValueError: If the solver settings are out of range.
    """
    spec = build_boundary(BoundaryConfig(preset=preset, params=preset_params))
    gas = GasConfig(gamma=gamma, bernoulli=bernoulli).to_params()
    params = SolverParams(
        dt=dt,
        t_min=t_min,
        corrector_iters=corrector_iters,
        interp_order=interp_order,  # type: ignore[arg-type]
        n_characteristics=n_characteristics,
    )
    return solve_patch(spec, gas, params, residual_t_floor=residual_t_floor)
