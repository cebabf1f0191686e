"""Bounding curves of the physical patch: the wall PE, the sonic curve PD and the characteristic DE."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from sonic_patch.inversion.patch import PhysicalPatch
from sonic_patch.verify.holder import HolderFit, holder_fit

logger = logging.getLogger(__name__)

PHYSICAL_HOLDER_EXPONENT = 1.0 / 6.0


@dataclass(frozen=True)
class Polyline:
    """Ordered curve samples with per-point fields; `extra` holds optional columns."""

    x: NDArray[np.float64]
    y: NDArray[np.float64]
    theta: NDArray[np.float64]
    varpi: NDArray[np.float64]
    extra: dict[str, NDArray[np.float64]] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.x.size)

    def arclength(self) -> NDArray[np.float64]:
        return np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(self.x), np.diff(self.y)))])

    def columns(self) -> dict[str, NDArray[np.float64]]:
        return {"x": self.x, "y": self.y, "theta": self.theta, "varpi": self.varpi, **self.extra}


@dataclass(frozen=True)
class MonotonicityFlag:
    """Whether theta strictly decreases along a curve, and where it first fails."""

    passed: bool
    first_failure: int | None = None
    location: tuple[float, float] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "first_failure": self.first_failure,
            "location": list(self.location) if self.location is not None else None,
        }


@dataclass(frozen=True)
class CurveSet:
    pe: Polyline
    pd: Polyline
    de: Polyline
    corner_d: tuple[float, float]
    flags: dict[str, MonotonicityFlag]


def _decreasing(curve: Polyline) -> MonotonicityFlag:
    """Mesh consistency echo: theta = theta_hat_1 - r with r monotone along PD and DE."""
    steps = np.diff(curve.theta)
    bad = np.flatnonzero(~(steps < 0.0))
    if bad.size == 0:
        return MonotonicityFlag(passed=True)
    i = int(bad[0]) + 1
    return MonotonicityFlag(False, i, (float(curve.x[i]), float(curve.y[i])))


def _pd_tangent(patch: PhysicalPatch, x: NDArray, y: NDArray) -> tuple[NDArray, NDArray]:
    """Unit tangent of PD: perpendicular to grad(varpi), oriented from P to D."""
    if patch.gradients is not None:
        gx = patch.gradients.varpi_x[-1, ::-1]
        gy = patch.gradients.varpi_y[-1, ::-1]
        tx, ty = gy, -gx
    else:
        tx, ty = np.gradient(x), np.gradient(y)
    norm = np.hypot(tx, ty)
    tx, ty = tx / norm, ty / norm
    chord = np.array([x[-1] - x[0], y[-1] - y[0]])
    sign = 1.0 if float(np.mean(tx * chord[0] + ty * chord[1])) >= 0.0 else -1.0
    return sign * tx, sign * ty


def extract_curves(patch: PhysicalPatch) -> CurveSet:
    """PE from P to E, PD from P to D and DE from D to E, with theta monotonicity flags."""
    n = patch.mesh.n_levels
    diag = np.arange(n)[::-1]
    pe = Polyline(
        x=patch.x[diag, diag],
        y=patch.y[diag, diag],
        theta=patch.theta[diag, diag],
        varpi=patch.varpi[diag, diag],
    )

    pd_x = patch.x[-1, ::-1]
    pd_y = patch.y[-1, ::-1]
    tan_x, tan_y = _pd_tangent(patch, pd_x, pd_y)
    pd_base = Polyline(pd_x, pd_y, patch.theta[-1, ::-1], patch.varpi[-1, ::-1])
    pd = Polyline(
        x=pd_base.x,
        y=pd_base.y,
        theta=pd_base.theta,
        varpi=pd_base.varpi,
        extra={"arclength": pd_base.arclength(), "tangent_x": tan_x, "tangent_y": tan_y},
    )

    de = Polyline(
        x=patch.x[::-1, 0],
        y=patch.y[::-1, 0],
        theta=patch.theta[::-1, 0],
        varpi=patch.varpi[::-1, 0],
    )

    flags = {"theta_decreasing_pd": _decreasing(pd), "theta_decreasing_de": _decreasing(de)}
    for name, flag in flags.items():
        if not flag.passed:
            logger.warning(f"{name} fails at point {flag.first_failure}, (x, y) = {flag.location}")
    return CurveSet(pe=pe, pd=pd, de=de, corner_d=patch.corner_d, flags=flags)


def de_slope_defect(patch: PhysicalPatch) -> float:
    """max |secant slope - tan(beta at the midpoint)| over DE segments with t > 0."""
    t = patch.t[:-1, 0]
    r = patch.r[:-1, 0]
    x = patch.x[:-1, 0]
    y = patch.y[:-1, 0]
    secant = np.diff(y) / np.diff(x)
    t_mid = 0.5 * (t[1:] + t[:-1])
    r_mid = 0.5 * (r[1:] + r[:-1])
    beta_mid = patch.theta_hat_1 - r_mid - np.arccos(t_mid)
    return float(np.max(np.abs(secant - np.tan(beta_mid))))


def pd_gradient_holder(patch: PhysicalPatch) -> dict[str, HolderFit]:
    """Hoelder fits of each gradient component along PD against arc length."""
    if patch.gradients is None:
        raise ValueError("pd_gradient_holder needs gradients (run physical_gradients first)")
    pd_x = patch.x[-1, ::-1]
    pd_y = patch.y[-1, ::-1]
    s = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(pd_x), np.diff(pd_y)))])
    fits = {}
    for name in ("theta_x", "theta_y", "varpi_x", "varpi_y"):
        values = getattr(patch.gradients, name)[-1, ::-1]
        try:
            fits[name] = holder_fit(s, values, predicted_exponent=PHYSICAL_HOLDER_EXPONENT)
        except ValueError as exc:
            fits[name] = HolderFit(np.nan, np.nan, np.nan, 0, int(s.size), PHYSICAL_HOLDER_EXPONENT, str(exc))
    return fits
