from __future__ import annotations

"""Mapping the hodograph solution back to the physical plane.

Each positive characteristic of the (t, r) plane is the image of a negative characteristic
of the flow, so along it

    dx/dt = F3 V_bar t / (2F),    dy/dt = F1 V_bar t / (2F)

and the physical curve has slope F1/F3 = tan(beta). Integration starts at the wall foot
(x_b, phi(x_b)) and runs down to the sonic row with the trapezoidal rule; the integrand
vanishes at t = 0.
"""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import NDArray

from sonic_patch.boundary.trace import BoundaryTrace
from sonic_patch.errors import InversionError
from sonic_patch.gas import GasParams
from sonic_patch.inversion.coefficients import f_coefficients
from sonic_patch.solver.mesh import CharMesh
from sonic_patch.solver.solution import HodographSolution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GradientFields:
    """Physical gradients of theta and varpi per node, from the closed forms.

    Attributes:
        theta_x, theta_y, varpi_x, varpi_y: Gradient components, shape (L, L).
        magnitude_sq: varpi_x^2 + varpi_y^2.
        magnitude_defect: Largest relative defect of the closed form of magnitude_sq.
        inner_product: (theta_x, theta_y) . (varpi_y, -varpi_x) per node.
        inner_product_defect: Largest relative defect against -4 tau K / (U_bar V_bar).
        magnitude_bounds: Observed (min, max) of magnitude_sq.
    """

    theta_x: NDArray[np.float64]
    theta_y: NDArray[np.float64]
    varpi_x: NDArray[np.float64]
    varpi_y: NDArray[np.float64]
    magnitude_sq: NDArray[np.float64]
    magnitude_defect: float
    inner_product: NDArray[np.float64]
    inner_product_defect: float
    magnitude_bounds: tuple[float, float]

    def summary(self) -> dict[str, Any]:
        return {
            "magnitude_defect": self.magnitude_defect,
            "inner_product_defect": self.inner_product_defect,
            "magnitude_min": self.magnitude_bounds[0],
            "magnitude_max": self.magnitude_bounds[1],
        }


@dataclass(frozen=True)
class PhysicalPatch:
    """Physical coordinates and fields at every mesh node.

    Attributes:
        mesh: Mesh the nodes belong to.
        theta_hat_1: Flow angle at P.
        x, y: Node positions, shape (L, L).
        t, r: Hodograph coordinates broadcast to (L, L).
        theta: theta_hat_1 - r.
        varpi: sqrt(1 - t^2).
        jacobian: t U_bar V_bar / (4F).
        corner_d: (x, y) of D, the sonic end of characteristic 0.
        gradients: Filled by `physical_gradients`.
    """

    mesh: CharMesh
    theta_hat_1: float
    x: NDArray[np.float64]
    y: NDArray[np.float64]
    t: NDArray[np.float64]
    r: NDArray[np.float64]
    theta: NDArray[np.float64]
    varpi: NDArray[np.float64]
    jacobian: NDArray[np.float64]
    corner_d: tuple[float, float]
    gradients: GradientFields | None = None


def _coefficient_F(t: NDArray, gas: GasParams) -> NDArray:
    return (1.0 - t * t) * (gas.kappa + 1.0 - t * t)


def reconstruct(sol: HodographSolution, trace: BoundaryTrace, gas: GasParams) -> PhysicalPatch:
    """Integrate the physical coordinates along every positive characteristic.

    Raises:
        ValueError: If the solution has not been closed.
        InversionError: If an integrand is not finite.
    """
    if not sol.closed:
        raise ValueError("reconstruct needs a closed solution (run close_sonic_line first)")
    mesh = sol.mesh
    n = mesh.n_levels
    mask = mesh.mask
    T = np.where(mask, mesh.t[:, None], np.nan)
    t_safe = np.where(mask, T, 0.0)
    r_safe = np.where(mask, mesh.r, 0.0)

    f1, _, f3, _ = f_coefficients(t_safe, r_safe, trace.theta_hat_1)
    weight = sol.v_bar * t_safe / (2.0 * _coefficient_F(t_safe, gas))
    dxdt = f3 * weight
    dydt = f1 * weight

    bad = mask & ~(np.isfinite(dxdt) & np.isfinite(dydt))
    if np.any(bad):
        char_id = int(np.argwhere(bad)[0][1])
        raise InversionError("non-finite integrand", char_id=char_id)

    x = np.full((n, n), np.nan)
    y = np.full((n, n), np.nan)
    diag = np.arange(n)
    x[diag, diag] = mesh.feet_x
    y[diag, diag] = trace.spec.phi(mesh.feet_x)
    for k in range(n - 1):
        h = mesh.t[k + 1] - mesh.t[k]
        x[k + 1, : k + 1] = x[k, : k + 1] + 0.5 * h * (dxdt[k, : k + 1] + dxdt[k + 1, : k + 1])
        y[k + 1, : k + 1] = y[k, : k + 1] + 0.5 * h * (dydt[k, : k + 1] + dydt[k + 1, : k + 1])

    varpi = np.sqrt(1.0 - T * T)
    jacobian = T * sol.u_bar * sol.v_bar / (4.0 * _coefficient_F(t_safe, gas))
    jacobian = np.where(mask, jacobian, np.nan)
    patch = PhysicalPatch(
        mesh=mesh,
        theta_hat_1=trace.theta_hat_1,
        x=x,
        y=y,
        t=T,
        r=np.where(mask, mesh.r, np.nan),
        theta=trace.theta_hat_1 - np.where(mask, mesh.r, np.nan),
        varpi=varpi,
        jacobian=jacobian,
        corner_d=(float(x[-1, 0]), float(y[-1, 0])),
    )
    logger.info(f"Reconstructed {mesh.n_nodes} nodes; D = ({patch.corner_d[0]:.6f}, {patch.corner_d[1]:.6f})")
    return patch


def physical_gradients(
    sol: HodographSolution, patch: PhysicalPatch, gas: GasParams
) -> GradientFields:
    """Closed-form gradients of theta and varpi at every node.

    W_bar supplies the singular combination (U_bar - V_bar)/t, so the sonic row uses the
    transported value.
    """
    mask = patch.mesh.mask
    t = np.where(mask, patch.t, 0.0)
    r = np.where(mask, patch.r, 0.0)
    u, v, w = sol.u_bar, sol.v_bar, sol.w_bar
    f1, f2, f3, f4 = f_coefficients(t, r, patch.theta_hat_1)
    theta = patch.theta_hat_1 - r
    tau = np.sqrt(1.0 - t * t)
    K = gas.kappa + 1.0 - t * t
    uv = u * v
    total = u + v

    theta_x = (f1 * v - f2 * u) / uv
    theta_y = (f4 * u - f3 * v) / uv
    varpi_x = -K * (np.sin(theta) * total + tau * np.cos(theta) * w) / uv
    varpi_y = K * (np.cos(theta) * total - tau * np.sin(theta) * w) / uv

    magnitude_sq = varpi_x**2 + varpi_y**2
    closed_mag = (K / uv) ** 2 * (total**2 + tau**2 * w**2)
    inner = theta_x * varpi_y - theta_y * varpi_x
    closed_inner = -4.0 * tau * K / uv

    mag_defect = np.abs(magnitude_sq - closed_mag) / np.abs(closed_mag)
    inner_defect = np.abs(inner - closed_inner) / np.abs(closed_inner)

    def masked(field: NDArray) -> NDArray:
        return np.where(mask, field, np.nan)

    return GradientFields(
        theta_x=masked(theta_x),
        theta_y=masked(theta_y),
        varpi_x=masked(varpi_x),
        varpi_y=masked(varpi_y),
        magnitude_sq=masked(magnitude_sq),
        magnitude_defect=float(np.max(mag_defect[mask])),
        inner_product=masked(inner),
        inner_product_defect=float(np.max(inner_defect[mask])),
        magnitude_bounds=(float(np.min(magnitude_sq[mask])), float(np.max(magnitude_sq[mask]))),
    )
