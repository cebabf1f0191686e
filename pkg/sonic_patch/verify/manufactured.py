from __future__ import annotations

"""Order verification of the marching kernel with a manufactured solution.

The exact pair is polynomial,

    U*(t, r) = 1 + a r + u1 t + u2 t^2,    V*(t, r) = 1 + a r + v1 t + v2 t^2,

so U* = V* on t = 0 and the singular terms stay bounded. Source terms

    src+ = (d_t + lambda d_r) U* - G+(t, U*, V*),    src- = (d_t - lambda d_r) V* - G-(t, U*, V*)

make (U*, V*) an exact solution of the forced system, and wall values are taken from the
exact pair. Marching with the sources must then reproduce it to O(dt^2).
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
from numpy.typing import NDArray

from sonic_patch.boundary.region import RegionGeometry
from sonic_patch.boundary.trace import BoundaryTrace
from sonic_patch.config import SolverParams
from sonic_patch.gas import GasParams
from sonic_patch.solver.kernel import rhs_minus, rhs_plus
from sonic_patch.solver.march import march
from sonic_patch.solver.mesh import build_mesh

logger = logging.getLogger(__name__)

MANUFACTURED_T_MIN = 0.05
# Coarse step of the order check; 1e-2 is still pre-asymptotic (ratio above 5)
MANUFACTURED_DT = 5e-3


@dataclass(frozen=True)
class ManufacturedProblem:
    """Polynomial exact pair and the forcing that makes it a solution.

    Attributes:
        gas: Gas constants for lambda and the right-hand sides.
        slope_r: a, shared r-slope of both components.
        u_coeffs: (u1, u2).
        v_coeffs: (v1, v2).
        source_sign: +1 for the correct forcing; -1 flips it (sensitivity check).
    """

    gas: GasParams
    slope_r: float = 0.5
    u_coeffs: tuple[float, float] = (1.0, 1.0)
    v_coeffs: tuple[float, float] = (-1.0, 0.3)
    source_sign: float = 1.0

    def exact(self, t: NDArray, r: NDArray) -> tuple[NDArray, NDArray]:
        t, r = np.asarray(t, dtype=float), np.asarray(r, dtype=float)
        base = 1.0 + self.slope_r * r
        u1, u2 = self.u_coeffs
        v1, v2 = self.v_coeffs
        return base + u1 * t + u2 * t * t, base + v1 * t + v2 * t * t

    def source(self, t: NDArray, r: NDArray) -> tuple[NDArray, NDArray]:
        t = np.asarray(t, dtype=float)
        lam = np.sqrt(1.0 - t * t) * t * t / ((1.0 - t * t) * (self.gas.kappa + 1.0 - t * t))
        u, v = self.exact(t, r)
        u1, u2 = self.u_coeffs
        v1, v2 = self.v_coeffs
        du_plus = u1 + 2.0 * u2 * t + lam * self.slope_r
        dv_minus = v1 + 2.0 * v2 * t - lam * self.slope_r
        src_u = du_plus - rhs_plus(t, u, v, self.gas)
        src_v = dv_minus - rhs_minus(t, u, v, self.gas)
        return self.source_sign * src_u, self.source_sign * src_v

    def boundary_values(self, t: NDArray, r: NDArray) -> tuple[NDArray, NDArray]:
        return self.exact(t, r)


def manufactured_problem(
    gas: GasParams,
    slope_r: float = 0.5,
    u_coeffs: tuple[float, float] = (1.0, 1.0),
    v_coeffs: tuple[float, float] = (-1.0, 0.3),
    source_sign: float = 1.0,
) -> ManufacturedProblem:
    return ManufacturedProblem(gas, slope_r, u_coeffs, v_coeffs, source_sign)


@dataclass(frozen=True)
class ManufacturedRun:
    dt: float
    t_last: float
    errors_by_level: NDArray[np.float64]
    t_levels: NDArray[np.float64]

    def max_error(self, t_floor: float = 0.0) -> float:
        keep = self.t_levels >= t_floor - 1e-12
        return float(np.max(self.errors_by_level[keep]))


def run_manufactured(
    problem: ManufacturedProblem,
    trace: BoundaryTrace,
    geometry: RegionGeometry,
    dt: float,
    t_min: float = MANUFACTURED_T_MIN,
    corrector_iters: int = 2,
    interp_order: int = 3,
) -> ManufacturedRun:
    """March the forced system on the trace's region and measure the max-norm error per level."""
    params = SolverParams(dt=dt, t_min=t_min, corrector_iters=corrector_iters, interp_order=interp_order)
    mesh = build_mesh(trace, geometry, params)
    sol = march(
        mesh,
        trace,
        problem.gas,
        params,
        source=problem.source,
        boundary_values=problem.boundary_values,
        check_bounds=False,
    )
    last = mesh.last_marched
    errors = np.empty(last + 1)
    for k in range(last + 1):
        r = mesh.level_nodes(k)
        u_star, v_star = problem.exact(np.full_like(r, mesh.t[k]), r)
        errors[k] = max(
            float(np.max(np.abs(sol.u_bar[k, : k + 1] - u_star))),
            float(np.max(np.abs(sol.v_bar[k, : k + 1] - v_star))),
        )
    return ManufacturedRun(dt=mesh.dt, t_last=float(mesh.t[last]), errors_by_level=errors, t_levels=mesh.t[: last + 1])


def manufactured_order(
    trace: BoundaryTrace,
    geometry: RegionGeometry,
    gas: GasParams,
    dt: float = MANUFACTURED_DT,
    t_min: float = MANUFACTURED_T_MIN,
    problem: ManufacturedProblem | None = None,
) -> dict[str, Any]:
    """Errors at dt and dt/2, their ratio and order, and the error with flipped forcing.

    Both errors are measured on the levels the coarse run reaches, which the fine run
    shares.
    """
    problem = problem or manufactured_problem(gas)
    coarse = run_manufactured(problem, trace, geometry, dt, t_min)
    fine = run_manufactured(problem, trace, geometry, dt / 2.0, t_min)
    floor = coarse.t_last
    e_coarse, e_fine = coarse.max_error(floor), fine.max_error(floor)
    ratio = e_coarse / e_fine if e_fine > 0.0 else math.inf

    flipped = replace(problem, source_sign=-problem.source_sign)
    e_flipped = run_manufactured(flipped, trace, geometry, dt, t_min).max_error(floor)

    result = {
        "dt": dt,
        "t_floor": floor,
        "error_coarse": e_coarse,
        "error_fine": e_fine,
        "ratio": ratio,
        "order": math.log2(ratio) if math.isfinite(ratio) and ratio > 0.0 else math.nan,
        "error_flipped_source": e_flipped,
    }
    logger.info(f"Manufactured solution: errors {e_coarse:.3e} -> {e_fine:.3e}, ratio {ratio:.3f}")
    return result

