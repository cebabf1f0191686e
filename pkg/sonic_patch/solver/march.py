from __future__ import annotations

"""Marching (U_bar, V_bar) from the wall image down to t_min.

Each step goes from level k to level k + 1 (dt downward in t) with Heun's method:
an explicit Euler predictor followed by `corrector_iters` trapezoidal sweeps.

- U_bar rides its own positive characteristic, whose previous node is a mesh node.
- V_bar is carried along the negative characteristic through the new node. Its foot at
  level k is r - (s(t_k) - s(t_k+1)); values there are interpolated along level k. If the
  foot falls below the wall image, the characteristic is followed to where it crosses the
  wall and the step starts from wall data at that crossing instead.
"""

import logging
import math
from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from sonic_patch.boundary.trace import BoundaryTrace, hodograph_data
from sonic_patch.config import SolverParams
from sonic_patch.errors import GeometryError, MarchError
from sonic_patch.gas import GasParams, char_shift_s_exact, growth_constant
from sonic_patch.solver.kernel import rhs_minus, rhs_plus
from sonic_patch.solver.mesh import CharMesh
from sonic_patch.solver.solution import BoundViolation, HodographSolution

logger = logging.getLogger(__name__)

# (t, r) -> (source for the U_bar equation, source for the V_bar equation)
SourceFn = Callable[[NDArray, NDArray], tuple[NDArray, NDArray]]
# (t, r) on the wall image -> (U_bar, V_bar) to use there instead of the wall data
BoundaryValuesFn = Callable[[NDArray, NDArray], tuple[NDArray, NDArray]]

FOOT_TOL = 1e-13
MAX_RECORDED_VIOLATIONS = 50


class _WallData:
    """U_bar, V_bar on the wall image, from the trace or from an override."""

    def __init__(self, trace: BoundaryTrace, gas: GasParams, override: BoundaryValuesFn | None):
        self.trace = trace
        self.gas = gas
        self.override = override

    def at_x(self, x: NDArray) -> tuple[NDArray, NDArray, NDArray, NDArray]:
        """(t, r, U_bar, V_bar) at wall abscissae x."""
        data = hodograph_data(self.trace.spec, self.gas, np.atleast_1d(x))
        if self.override is None:
            return data["t"], data["r"], data["a_bar"], data["b_bar"]
        u, v = self.override(data["t"], data["r"])
        return data["t"], data["r"], np.asarray(u, dtype=float), np.asarray(v, dtype=float)


def _zero_source(t: NDArray, r: NDArray) -> tuple[NDArray, NDArray]:
    zeros = np.zeros(np.broadcast(t, r).shape)
    return zeros, zeros


def _interpolate_level(
    r_nodes: NDArray, u: NDArray, v: NDArray, r_eval: NDArray, order: int
) -> tuple[NDArray, NDArray]:
    # Level nodes are stored with decreasing r
    r_inc, u_inc, v_inc = r_nodes[::-1], u[::-1], v[::-1]
    if order == 3 and r_inc.size >= 4:
        spline = CubicSpline(r_inc, np.column_stack([u_inc, v_inc]), bc_type="not-a-knot")
        values = spline(r_eval)
        return values[:, 0], values[:, 1]
    return np.interp(r_eval, r_inc, u_inc), np.interp(r_eval, r_inc, v_inc)


def _wall_crossing(
    trace: BoundaryTrace, gas: GasParams, invariant: float, x_lo: float, x_hi: float
) -> float:
    """Wall abscissa where r + s(t) equals `invariant` (a negative characteristic)."""

    def g(x: float) -> float:
        data = hodograph_data(trace.spec, gas, x)
        return float(data["r"]) + float(char_shift_s_exact(float(data["t"]), gas)) - invariant

    g_lo, g_hi = g(x_lo), g(x_hi)
    if g_lo >= 0.0:
        return x_lo
    if g_hi <= 0.0:
        return x_hi
    return float(brentq(g, x_lo, x_hi, xtol=1e-15))


def march(
    mesh: CharMesh,
    trace: BoundaryTrace,
    gas: GasParams,
    params: SolverParams | None = None,
    source: SourceFn | None = None,
    boundary_values: BoundaryValuesFn | None = None,
    check_bounds: bool = True,
) -> HodographSolution:
    """March the characteristic system from the wall image to t_min.

    Args:
        mesh: Characteristic mesh.
        trace: Boundary trace the mesh was built from.
        gas: Gas constants.
        params: Overrides the mesh's corrector_iters and interp_order when given.
        source: Extra right-hand side terms, for manufactured-solution runs.
        boundary_values: Replaces the wall data (a_bar, b_bar), for manufactured runs.
        check_bounds: Record values outside [m0_bar/2, 2 e^k0 M0_bar].

    Returns:
        Solution on every marched level; the sonic row is left for `close_sonic_line`.

    Raises:
        MarchError: If a non-finite value appears.
        GeometryError: If a negative-characteristic foot lies above r_check after clipping.
    """
    corrector_iters = params.corrector_iters if params is not None else mesh.corrector_iters
    order = params.interp_order if params is not None else mesh.interp_order
    src = source or _zero_source
    wall = _WallData(trace, gas, boundary_values)

    n = mesh.n_levels
    last = mesh.last_marched
    u_bar = np.full((n, n), np.nan)
    v_bar = np.full((n, n), np.nan)

    _, _, u_feet, v_feet = wall.at_x(mesh.feet_x[: last + 1])
    u_bar[0, 0], v_bar[0, 0] = u_feet[0], v_feet[0]

    for k in range(last):
        t_a, t_b = float(mesh.t[k]), float(mesh.t[k + 1])
        h = t_b - t_a
        r_old = mesh.level_nodes(k)
        u_old, v_old = u_bar[k, : k + 1], v_bar[k, : k + 1]
        r_new = mesh.r[k + 1, : k + 1]

        src_u_old, _ = src(np.full_like(r_old, t_a), r_old)
        g_u_old = rhs_plus(t_a, u_old, v_old, gas) + src_u_old

        # Negative-characteristic feet on level k
        r_foot = r_new - (mesh.s[k] - mesh.s[k + 1])
        r_wall, r_top = float(r_old[-1]), float(r_old[0])
        if np.any(r_foot > r_top + FOOT_TOL):
            j = int(np.flatnonzero(r_foot > r_top + FOOT_TOL)[0])
            raise GeometryError(f"foot of node (level {k + 1}, char {j}) lies above r_check")
        inside = r_foot >= r_wall - FOOT_TOL

        t_foot = np.full_like(r_foot, t_a)
        h_v = np.full_like(r_foot, h)
        u_foot = np.empty_like(r_foot)
        v_foot = np.empty_like(r_foot)
        if np.any(inside):
            r_foot[inside] = np.clip(r_foot[inside], r_wall, r_top)
            u_foot[inside], v_foot[inside] = _interpolate_level(
                r_old, u_old, v_old, r_foot[inside], order
            )
        for j in np.flatnonzero(~inside):
            x_cross = _wall_crossing(
                trace,
                gas,
                float(r_new[j] + mesh.s[k + 1]),
                float(mesh.feet_x[k + 1]),
                float(mesh.feet_x[k]),
            )
            t_c, r_c, u_c, v_c = wall.at_x(np.array([x_cross]))
            t_foot[j], r_foot[j], u_foot[j], v_foot[j] = t_c[0], r_c[0], u_c[0], v_c[0]
            h_v[j] = t_b - t_foot[j]

        _, src_v_foot = src(t_foot, r_foot)
        g_v_foot = rhs_minus(t_foot, u_foot, v_foot, gas) + src_v_foot

        u_new = u_old + h * g_u_old
        v_new = v_foot + h_v * g_v_foot
        t_new = np.full_like(r_new, t_b)
        src_u_new, src_v_new = src(t_new, r_new)
        for _ in range(corrector_iters):
            g_u_new = rhs_plus(t_b, u_new, v_new, gas) + src_u_new
            g_v_new = rhs_minus(t_b, u_new, v_new, gas) + src_v_new
            u_new = u_old + 0.5 * h * (g_u_old + g_u_new)
            v_new = v_foot + 0.5 * h_v * (g_v_foot + g_v_new)

        u_bar[k + 1, : k + 1], v_bar[k + 1, : k + 1] = u_new, v_new
        u_bar[k + 1, k + 1], v_bar[k + 1, k + 1] = u_feet[k + 1], v_feet[k + 1]

        row_ok = np.isfinite(u_bar[k + 1, : k + 2]) & np.isfinite(v_bar[k + 1, : k + 2])
        if not np.all(row_ok):
            j = int(np.flatnonzero(~row_ok)[0])
            raise MarchError("non-finite value while marching", level=k + 1, char_id=j)

    m0_bar, M0_bar = trace.bar_bounds
    k0 = growth_constant(trace.t0, gas)
    interval = (0.5 * m0_bar, 2.0 * math.exp(k0) * M0_bar)
    violations: list[BoundViolation] = []
    n_violations = 0
    if check_bounds:
        violations, n_violations = _bound_violations(mesh, u_bar, v_bar, interval)
        if n_violations:
            logger.warning(
                f"{n_violations} node value(s) outside [{interval[0]:.4g}, {interval[1]:.4g}]"
            )

    with np.errstate(invalid="ignore", divide="ignore"):
        w_bar = (u_bar - v_bar) / mesh.t[:, None]
    w_bar[-1, :] = np.nan

    logger.debug(f"Marched {last} steps down to t={mesh.t[last]:.4g}")
    return HodographSolution(
        mesh=mesh,
        u_bar=u_bar,
        v_bar=v_bar,
        w_bar=w_bar,
        bound_interval=interval,
        bound_violations=violations,
        n_bound_violations=n_violations,
    )


def _bound_violations(
    mesh: CharMesh, u_bar: NDArray, v_bar: NDArray, interval: tuple[float, float]
) -> tuple[list[BoundViolation], int]:
    lower, upper = interval
    found: list[BoundViolation] = []
    total = 0
    rows, cols = np.tril_indices(mesh.last_marched + 1)
    for name, values in (("u_bar", u_bar), ("v_bar", v_bar)):
        vals = values[rows, cols]
        bad = np.flatnonzero((vals < lower) | (vals > upper))
        total += bad.size
        for idx in bad[: max(0, MAX_RECORDED_VIOLATIONS - len(found))]:
            found.append(
                BoundViolation(
                    level=int(rows[idx]),
                    char_id=int(cols[idx]),
                    field=name,
                    value=float(vals[idx]),
                    lower=lower,
                    upper=upper,
                )
            )
    return found, total
