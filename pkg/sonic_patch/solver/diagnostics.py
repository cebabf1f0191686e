from __future__ import annotations

"""A-posteriori report on a closed hodograph solution.

Collects the bound constants of the boundary data, observed extrema of U_bar and V_bar
against their proven interval, the R and S maxima on the layer next to the sonic line and
away from it, the W_bar bound, the closure scalars, and Hoelder fits along t = 0.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from sonic_patch.boundary.trace import BoundaryTrace
from sonic_patch.gas import (
    GasParams,
    char_slope_lambda,
    degenerate_layer_width,
    growth_constant,
    lambda_bracket,
)
from sonic_patch.solver.solution import HodographSolution
from sonic_patch.verify.holder import HolderFit, holder_fit

logger = logging.getLogger(__name__)

SONIC_HOLDER_EXPONENT = 1.0 / 3.0


@dataclass
class DiagnosticsReport:
    """Bound constants, observed extrema and fits for one solution.

    Attributes:
        constants: m0_bar, M0_bar, m_hat0, M_hat0, k0, eps0, t0, r0, r_star.
        bounds: Observed U_bar, V_bar extrema against the proven interval.
        rs: R and S maxima on Omega_2 (t >= eps0), on the wall and on Omega_1 (t <= eps0).
        w_bar: Observed max |W_bar| against the a-priori bound.
        closure: Closure scalars.
        lambda_bracket: Bracket of lambda(t)/t^2 and whether every level satisfies it.
        holder: Fits along the sonic row.
    """

    constants: dict[str, float]
    bounds: dict[str, Any]
    rs: dict[str, Any]
    w_bar: dict[str, Any]
    closure: dict[str, Any]
    lambda_bracket: dict[str, Any]
    holder: dict[str, HolderFit] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(
            self.bounds["positive"]
            and self.bounds["within_interval"]
            and self.rs["omega1_ok"]
            and self.w_bar["within_bound"]
            and self.lambda_bracket["ok"]
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "constants": self.constants,
            "bounds": self.bounds,
            "rs": self.rs,
            "w_bar": self.w_bar,
            "closure": self.closure,
            "lambda_bracket": self.lambda_bracket,
            "holder": {name: fit.to_dict() for name, fit in self.holder.items()},
        }


def _safe_fit(positions: np.ndarray, values: np.ndarray, predicted: float) -> HolderFit:
    try:
        return holder_fit(positions, values, predicted_exponent=predicted)
    except ValueError as exc:
        return HolderFit(math.nan, math.nan, math.nan, 0, int(np.size(positions)), predicted, str(exc))


def diagnostics(sol: HodographSolution, trace: BoundaryTrace, gas: GasParams) -> DiagnosticsReport:
    """Build the report for a closed solution.

    Raises:
        ValueError: If the solution has not been closed.
    """
    if not sol.closed or sol.R is None or sol.S is None or sol.w_transport is None:
        raise ValueError("diagnostics need a closed solution (run close_sonic_line first)")
    assert sol.sonic is not None and sol.closure is not None

    mesh = sol.mesh
    geometry = mesh.geometry
    n = mesh.n_levels
    last = mesh.last_marched
    t0 = trace.t0

    m0_bar, M0_bar = trace.bar_bounds
    k0 = growth_constant(t0, gas)
    eps0 = degenerate_layer_width(t0, gas)
    constants = {
        "m0_bar": m0_bar,
        "M0_bar": M0_bar,
        "m_hat0": trace.m_hat0,
        "M_hat0": trace.M_hat0,
        "k0": k0,
        "eps0": eps0,
        "t0": t0,
        "r0": trace.r0,
        "r_star": geometry.r_star,
    }

    mask = mesh.mask
    lower, upper = sol.bound_interval
    u_nodes, v_nodes = sol.u_bar[mask], sol.v_bar[mask]
    bounds = {
        "interval": [lower, upper],
        "u_bar_range": [float(np.min(u_nodes)), float(np.max(u_nodes))],
        "v_bar_range": [float(np.min(v_nodes)), float(np.max(v_nodes))],
        "positive": sol.positive,
        "within_interval": sol.n_bound_violations == 0,
        "n_violations": sol.n_bound_violations,
        "violations": [v.to_dict() for v in sol.bound_violations],
    }

    # R, S maxima on the marched levels
    rows, cols = np.tril_indices(last + 1)
    t_nodes = mesh.t[rows]
    rs_abs = np.maximum(np.abs(sol.R[rows, cols]), np.abs(sol.S[rows, cols]))
    on_wall = rows == cols
    omega2 = t_nodes >= eps0
    max_omega2 = float(np.max(rs_abs[omega2])) if np.any(omega2) else 0.0
    max_wall = float(np.max(rs_abs[on_wall]))
    M_bar = 1.0 + 2.0 * max(max_omega2, max_wall)
    omega1 = ~omega2
    max_omega1 = float(np.max(rs_abs[omega1])) if np.any(omega1) else 0.0
    rs = {
        "max_omega2": max_omega2,
        "max_wall": max_wall,
        "max_omega1": max_omega1,
        "M_bar": M_bar,
        "omega1_ok": max_omega1 < M_bar,
    }
    if not rs["omega1_ok"]:
        logger.warning(f"max |R|, |S| on the sonic layer {max_omega1:.4g} >= M_bar {M_bar:.4g}")

    w_wall = np.abs(trace.samples["w_bar"])
    w_wall_max = float(np.max(w_wall))
    w_observed = float(np.nanmax(np.abs(sol.w_bar[mask])))
    w_bound = w_wall_max + (2.0 * k0 * t0 / (gas.kappa + 2.0)) * (
        2.0 * math.exp(k0) * M0_bar + M_bar
    )
    w_report = {
        "max_observed": w_observed,
        "max_sonic": float(np.max(np.abs(sol.sonic.w_bar))),
        "max_wall": w_wall_max,
        "bound": w_bound,
        "within_bound": w_observed <= w_bound,
        "sonic_to_wall_ratio": float(np.max(np.abs(sol.sonic.w_bar))) / w_wall_max,
    }

    k_lo, k_hi = lambda_bracket(t0, gas)
    t_marched = mesh.t[: last + 1]
    ratio = np.asarray(char_slope_lambda(t_marched, gas)) / t_marched**2
    bracket = {
        "lower": k_lo,
        "upper": k_hi,
        "observed": [float(np.min(ratio)), float(np.max(ratio))],
        "ok": bool(np.all((ratio >= k_lo * (1 - 1e-12)) & (ratio <= k_hi * (1 + 1e-12)))),
    }

    sonic = sol.sonic
    holder = {
        "u_bar_sonic": _safe_fit(sonic.r, sonic.u_extrap, SONIC_HOLDER_EXPONENT),
        "v_bar_sonic": _safe_fit(sonic.r, sonic.v_extrap, SONIC_HOLDER_EXPONENT),
        "w_bar_sonic": _safe_fit(sonic.r, sonic.w_bar, SONIC_HOLDER_EXPONENT),
    }

    report = DiagnosticsReport(
        constants=constants,
        bounds=bounds,
        rs=rs,
        w_bar=w_report,
        closure=sol.closure.to_dict(),
        lambda_bracket=bracket,
        holder=holder,
    )
    logger.info(
        f"Diagnostics: U_bar in {bounds['u_bar_range']}, V_bar in {bounds['v_bar_range']}, "
        f"M_bar={M_bar:.4g}, max |W_bar|={w_observed:.4g} (n={n})"
    )
    return report
