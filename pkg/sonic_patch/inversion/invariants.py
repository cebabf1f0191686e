"""Invariant checks on a reconstructed patch; failures are report entries."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from sonic_patch.boundary.trace import BoundaryTrace
from sonic_patch.gas import GasParams
from sonic_patch.inversion.curves import CurveSet
from sonic_patch.inversion.patch import PhysicalPatch
from sonic_patch.solver.mesh import CharMesh
from sonic_patch.solver.solution import HodographSolution

logger = logging.getLogger(__name__)

PE_TOL = 1e-10
TANGENCY_TOL = 1e-9
# Relative to the rise of varpi along each characteristic
SONIC_RISE_TOL = 0.05


@dataclass(frozen=True)
class InvariantCheck:
    passed: bool
    value: float
    location: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "value": self.value, "location": self.location}


@dataclass(frozen=True)
class InvariantReport:
    checks: dict[str, InvariantCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, check in self.checks.items() if not check.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "failures": self.failures(),
            "checks": {name: check.to_dict() for name, check in self.checks.items()},
        }


def _node(k: int, j: int) -> str:
    return f"level={k}, char_id={j}"


def _min_check(values: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> InvariantCheck:
    """Passes when every value is strictly positive; reports the smallest."""
    idx = int(np.argmin(values))
    ok = bool(np.all(values > 0.0))
    return InvariantCheck(ok, float(values[idx]), None if ok else _node(int(rows[idx]), int(cols[idx])))


def fold_over_margin(patch: PhysicalPatch) -> tuple[float, int | None]:
    """Smallest projection of a level segment on its level chord, as a fraction of the chord.

    Returns:
        (margin, level) with the level of the smallest margin.
    """
    worst, worst_level = np.inf, None
    for k in range(1, patch.mesh.n_levels):
        x = patch.x[k, : k + 1]
        y = patch.y[k, : k + 1]
        chord = np.array([x[-1] - x[0], y[-1] - y[0]])
        length = float(np.hypot(*chord))
        proj = (np.diff(x) * chord[0] + np.diff(y) * chord[1]) / length**2
        if float(np.min(proj)) < worst:
            worst, worst_level = float(np.min(proj)), k
    return worst, worst_level


def wall_tangency_defect(
    sol: HodographSolution, trace: BoundaryTrace, gas: GasParams
) -> tuple[float, int]:
    """Relative defect of the slip condition at the supersonic feet.

    On the wall (U_bar + V_bar) = mu (U_bar - V_bar) with mu = k (kappa + varpi^2) / (t varpi'),
    k the wall curvature phi''/(1 + phi'^2); mu comes from the wall geometry alone.

    Returns:
        (defect, level) with the level of the largest defect.
    """
    mesh = sol.mesh
    levels = np.flatnonzero(mesh.t > 0.0)
    x = mesh.feet_x[levels]
    spec = trace.spec
    varpi = spec.varpi_hat(x)
    curvature = spec.d2phi(x) / (1.0 + spec.dphi(x) ** 2)
    mu = curvature * (gas.kappa + varpi**2) / (mesh.t[levels] * spec.dvarpi_hat(x))
    u = sol.u_bar[levels, levels]
    v = sol.v_bar[levels, levels]
    defect = np.abs((u + v) - mu * (u - v)) / (np.abs(u) + np.abs(v))
    if not np.all(np.isfinite(defect)):
        return math.inf, int(levels[int(np.argmax(~np.isfinite(defect)))])
    i = int(np.argmax(defect))
    return float(defect[i]), int(levels[i])


def sonic_rise_defect(patch: PhysicalPatch) -> tuple[float, int | None]:
    """Relative error of varpi reached on PD by integrating grad(varpi) from each foot.

    The trapezoidal line integral runs over the physical nodes of a positive characteristic,
    so it depends on the reconstructed positions and the gradient fields, not on the mesh t.
    The error is taken against the rise 1 - varpi(foot); the foot at P has no rise.

    Returns:
        (defect, char_id) with the characteristic of the largest defect.
    """
    assert patch.gradients is not None
    mask = patch.mesh.mask
    gx, gy = patch.gradients.varpi_x, patch.gradients.varpi_y
    dx = np.diff(patch.x, axis=0)
    dy = np.diff(patch.y, axis=0)
    steps = 0.5 * (gx[:-1] + gx[1:]) * dx + 0.5 * (gy[:-1] + gy[1:]) * dy
    steps = np.where(mask[:-1], steps, 0.0)
    foot = np.diag(patch.varpi)
    rise = 1.0 - foot
    cols = np.flatnonzero(rise > 0.0)
    error = np.abs(foot[cols] + steps.sum(axis=0)[cols] - 1.0) / rise[cols]
    if error.size == 0:
        return 0.0, None
    if not np.all(np.isfinite(error)):
        return math.inf, int(cols[int(np.argmax(~np.isfinite(error)))])
    i = int(np.argmax(error))
    return float(error[i]), int(cols[i])


def foot_defect(mesh: CharMesh, curves: CurveSet, trace: BoundaryTrace) -> float:
    """Largest gap between the wall data at the PE points and the mesh levels and diagonal r.

    Only supersonic feet are compared; P is pinned to x1 by construction and is left out.
    """
    levels = mesh.t[::-1]
    supersonic = levels > 0.0
    data = trace.data_at(curves.pe.x[supersonic])
    diag_r = np.diag(mesh.r)[::-1][supersonic]
    return max(
        float(np.max(np.abs(data["t"] - levels[supersonic]))),
        float(np.max(np.abs(data["r"] - diag_r))),
    )


def check_invariants(
    patch: PhysicalPatch,
    sol: HodographSolution,
    curves: CurveSet,
    trace: BoundaryTrace,
    gas: GasParams,
) -> InvariantReport:
    """Jacobian sign, injectivity proxies, theta monotonicity, slip, sonic values and PE feet.

    The theta_decreasing entries echo the curve flags: theta = theta_hat_1 - r with r
    monotone along PD and DE, so they catch mesh corruption rather than a flow property.
    """
    mesh = patch.mesh
    rows, cols = np.tril_indices(mesh.n_levels)
    supersonic = patch.t[rows, cols] > 0.0
    r_sup, c_sup = rows[supersonic], cols[supersonic]

    checks: dict[str, InvariantCheck] = {}
    checks["jacobian_positive"] = _min_check(patch.jacobian[r_sup, c_sup], r_sup, c_sup)
    if patch.gradients is not None:
        inner = patch.gradients.inner_product[rows, cols]
        checks["inner_product_negative"] = _min_check(-inner, rows, cols)
    checks["positivity"] = InvariantCheck(
        sol.positive,
        float(min(np.nanmin(sol.u_bar[rows, cols]), np.nanmin(sol.v_bar[rows, cols]))),
    )

    margin, level = fold_over_margin(patch)
    checks["no_fold_over"] = InvariantCheck(
        margin > 0.0, margin, None if margin > 0.0 else f"level={level}"
    )

    for name, curve in (("theta_decreasing_pd", curves.pd), ("theta_decreasing_de", curves.de)):
        flag = curves.flags[name]
        location = None if flag.passed else f"point={flag.first_failure}, (x, y)={flag.location}"
        checks[name] = InvariantCheck(flag.passed, float(-np.max(np.diff(curve.theta))), location)

    defect, foot = wall_tangency_defect(sol, trace, gas)
    ok = defect <= TANGENCY_TOL
    checks["wall_tangency"] = InvariantCheck(ok, defect, None if ok else _node(foot, foot))

    if patch.gradients is not None:
        rise_defect, char_id = sonic_rise_defect(patch)
        ok = rise_defect <= SONIC_RISE_TOL
        location = None if ok else f"char_id={char_id}"
        checks["varpi_sonic"] = InvariantCheck(ok, rise_defect, location)

    pe_defect = foot_defect(mesh, curves, trace)
    checks["pe_reproduction"] = InvariantCheck(pe_defect <= PE_TOL, pe_defect)

    report = InvariantReport(checks)
    if report.passed:
        logger.info("All patch invariants hold")
    else:
        logger.warning(f"Patch invariants failing: {', '.join(report.failures())}")
    return report
