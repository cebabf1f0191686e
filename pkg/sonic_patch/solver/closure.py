from __future__ import annotations

"""Closing the solution on the sonic line t = 0.

U_bar and V_bar coalesce on t = 0, where the quotient (U_bar - V_bar)/t is 0/0. Closure
therefore does two independent things:

- extrapolates U_bar and V_bar linearly from the last two marched levels along each
  positive characteristic and takes their mean as the common sonic value;
- transports W_bar from the wall along each positive characteristic with the trapezoidal
  rule, using d+ W_bar = (t^2/F)(U - V) - (2 sqrt(1 - t^2)/F) S, which is regular at t = 0.
"""

import dataclasses
import logging

import numpy as np
from numpy.typing import NDArray

from sonic_patch.boundary.trace import BoundaryTrace
from sonic_patch.gas import GasParams
from sonic_patch.solver.kernel import transport_rhs
from sonic_patch.solver.mesh import CharMesh
from sonic_patch.solver.solution import ClosureSummary, HodographSolution, SonicTrace

logger = logging.getLogger(__name__)

COALESCENCE_SAFETY = 1.5
COALESCENCE_TOL_FACTOR = 10.0


def level_derivatives(mesh: CharMesh, values: NDArray) -> NDArray:
    """t d(values)/dr on every marched level, by finite differences along the level.

    Rows with a single node copy the row below them.
    """
    out = np.full_like(values, np.nan)
    last = mesh.last_marched
    for k in range(1, last + 1):
        r = mesh.level_nodes(k)
        vals = values[k, : k + 1]
        edge = 2 if r.size >= 3 else 1
        out[k, : k + 1] = mesh.t[k] * np.gradient(vals, r, edge_order=edge)
    out[0, 0] = out[1, 0]
    return out


def close_sonic_line(
    sol: HodographSolution, trace: BoundaryTrace, gas: GasParams
) -> HodographSolution:
    """Fill the sonic row and attach W_bar, R and S.

    Returns:
        A new solution; the input is not modified.
    """
    mesh = sol.mesh
    n = mesh.n_levels
    last = mesh.last_marched
    t = mesh.t

    R = level_derivatives(mesh, sol.u_bar)
    S = level_derivatives(mesh, sol.v_bar)

    # W_bar transport along positive characteristics, seeded with the wall value at each foot
    w_feet = trace.data_at(mesh.feet_x)["w_bar"]
    w_tr = np.full((n, n), np.nan)
    w_tr[0, 0] = w_feet[0]
    q = transport_rhs(
        np.broadcast_to(t[:, None], (n, n)), sol.u_bar, sol.v_bar, np.nan_to_num(S), gas
    )
    for k in range(last):
        h = t[k + 1] - t[k]
        w_tr[k + 1, : k + 1] = w_tr[k, : k + 1] + 0.5 * h * (q[k, : k + 1] + q[k + 1, : k + 1])
        w_tr[k + 1, k + 1] = w_feet[k + 1]

    # Final segment to t = 0: U = V there and S is held at its last marched value
    cols = np.arange(last + 1)
    s_sonic = S[last, cols]
    q_sonic = transport_rhs(np.zeros_like(s_sonic), 0.0, 0.0, s_sonic, gas)
    w_tr[-1, cols] = w_tr[last, cols] - 0.5 * t[last] * (q[last, cols] + q_sonic)
    w_tr[-1, -1] = w_feet[-1]

    # Linear extrapolation of U_bar and V_bar to t = 0
    u_ext = np.empty(n)
    v_ext = np.empty(n)
    for j in range(last + 1):
        if j < last:
            slope_u = (sol.u_bar[last - 1, j] - sol.u_bar[last, j]) / (t[last - 1] - t[last])
            slope_v = (sol.v_bar[last - 1, j] - sol.v_bar[last, j]) / (t[last - 1] - t[last])
        else:
            slope_u = slope_v = 0.0
        u_ext[j] = sol.u_bar[last, j] - t[last] * slope_u
        v_ext[j] = sol.v_bar[last, j] - t[last] * slope_v
    p_data = trace.data_at(np.array([trace.spec.x1]))
    u_ext[-1] = float(p_data["a_bar"][0])
    v_ext[-1] = u_ext[-1]
    common = 0.5 * (u_ext + v_ext)
    discrepancy = np.abs(u_ext - v_ext)

    u_bar = sol.u_bar.copy()
    v_bar = sol.v_bar.copy()
    w_bar = sol.w_bar.copy()
    u_bar[-1, :] = common
    v_bar[-1, :] = common
    w_bar[-1, :] = w_tr[-1, :]
    R[-1, :] = R[last, :]
    R[-1, -1] = R[last, last]
    S[-1, :] = S[last, :]
    S[-1, -1] = S[last, last]

    marched = mesh.mask.copy()
    marched[-1, :] = False
    quotient = sol.w_bar[marched]
    w_max = float(np.nanmax(np.abs(np.concatenate([quotient, w_tr[mesh.mask]]))))
    C = COALESCENCE_SAFETY * w_max
    tolerance = COALESCENCE_TOL_FACTOR * C * mesh.t_min
    max_disc = float(np.max(discrepancy))
    flagged = max_disc > tolerance
    if flagged:
        logger.warning(
            f"Sonic-line coalescence discrepancy {max_disc:.3e} exceeds tolerance {tolerance:.3e}"
        )

    gap = np.abs(sol.u_bar - sol.v_bar)[marched]
    t_nodes = np.broadcast_to(t[:, None], (n, n))[marched]
    agreement = np.abs(sol.w_bar - w_tr)[marched]
    closure = ClosureSummary(
        coalescence_constant=C,
        tolerance=tolerance,
        max_discrepancy=max_disc,
        flagged=flagged,
        closure_defect=float(np.max(np.abs(sol.w_bar[last, cols] - w_tr[last, cols]))),
        transport_agreement=float(np.max(agreement)),
        degeneracy_ok=bool(np.all(gap <= C * t_nodes)),
    )
    sonic = SonicTrace(
        r=mesh.r[-1, :].copy(),
        u_extrap=u_ext,
        v_extrap=v_ext,
        value=common,
        discrepancy=discrepancy,
        w_bar=w_tr[-1, :].copy(),
    )
    logger.info(
        f"Sonic line closed: max discrepancy {max_disc:.3e}, closure defect "
        f"{closure.closure_defect:.3e}, max |W_bar| {w_max:.4g}"
    )
    return dataclasses.replace(
        sol, u_bar=u_bar, v_bar=v_bar, w_bar=w_bar, w_transport=w_tr, R=R, S=S,
        sonic=sonic, closure=closure,
    )
