from __future__ import annotations

"""Admissibility checks and the boundary trace in angle and hodograph variables.

Along the wall the flow angle is theta_hat = arctan(phi'), and the hodograph image
of a wall point is (t, r) = (sqrt(1 - varpi_hat^2), theta_hat(x1) - theta_hat). The
characteristic derivatives of Xi on the wall are

    a_hat = cos(theta_hat) / (2 varpi_hat) * (t varpi_hat' / (kappa + varpi_hat^2) - k)
    b_hat = cos(theta_hat) / (2 varpi_hat) * (t varpi_hat' / (kappa + varpi_hat^2) + k)
    d_hat = cos(theta_hat) varpi_hat' / (2 varpi_hat (kappa + varpi_hat^2))

with k = phi'' / (1 + phi'^2) the wall curvature term.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from sonic_patch.boundary.spec import BoundarySpec
from sonic_patch.errors import DomainError, TraceError
from sonic_patch.gas import GasParams, char_slope_lambda

logger = logging.getLogger(__name__)

# Tolerance on varpi_hat(x1) = 1
SONIC_START_TOL = 1e-12
# Slack allowed when looking up r or t just outside the sampled range
LOOKUP_SLACK = 1e-12
BRENTQ_XTOL = 1e-15
# t at P implied by SONIC_START_TOL
SONIC_T_TOL = 2.0 * math.sqrt(SONIC_START_TOL)


# =============================================================================
# Pointwise boundary data
# =============================================================================


def hodograph_data(spec: BoundarySpec, gas: GasParams, x: ArrayLike) -> dict[str, NDArray]:
    """Evaluate every boundary quantity at the abscissae `x` from the closed-form spec."""
    x = np.asarray(x, dtype=float)
    dphi = spec.dphi(x)
    curv = spec.d2phi(x) / (1.0 + dphi**2)
    varpi = spec.varpi_hat(x)
    dvarpi = spec.dvarpi_hat(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.sqrt(np.clip(1.0 - varpi**2, 0.0, None))
        theta = np.arctan(dphi)
        theta_1 = math.atan(float(spec.dphi(np.array(spec.x1))))
        front = np.cos(theta) / (2.0 * varpi)
        mach_term = t * dvarpi / (gas.kappa + varpi**2)
        a_hat = front * (mach_term - curv)
        b_hat = front * (mach_term + curv)
        d_hat = np.cos(theta) * dvarpi / (2.0 * varpi * (gas.kappa + varpi**2))
        a_bar = 1.0 / a_hat
        b_bar = -1.0 / b_hat
        w_bar = 2.0 * d_hat / (a_hat * b_hat)
    return {
        "x": x,
        "y": spec.phi(x),
        "theta_hat": theta,
        "varpi_hat": varpi,
        "t": t,
        "r": theta_1 - theta,
        "a_hat": a_hat,
        "b_hat": b_hat,
        "d_hat": d_hat,
        "a_bar": a_bar,
        "b_bar": b_bar,
        "w_bar": w_bar,
    }


# =============================================================================
# Admissibility
# =============================================================================


@dataclass
class CheckResult:
    """One admissibility check evaluated over the samples.

    Attributes:
        name: Check name (e.g., "concavity").
        passed: True if the margin is strictly positive at every evaluated sample.
        min_margin: Smallest margin observed (nan if nothing was evaluable).
        worst_x: Abscissa of the smallest margin.
        description: What the margin measures.
    """

    name: str
    passed: bool
    min_margin: float
    worst_x: float
    description: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "min_margin": _finite_or_none(self.min_margin),
            "worst_x": _finite_or_none(self.worst_x),
            "description": self.description,
        }


@dataclass
class AdmissibilityReport:
    """Per-sample margins of every hypothesis on the wall data.

    Attributes:
        x: Sample abscissae.
        margins: Check name -> per-sample margin (positive means satisfied, nan means
            not evaluated at that sample).
        checks: Check name -> summary.
        phi_bounds: Observed (min, max) of phi'.
        mach_form_agrees: True if the Mach-number form of the compatibility condition
            has the same sign as the varpi form at every sample.
    """

    x: NDArray[np.float64]
    margins: dict[str, NDArray[np.float64]]
    checks: dict[str, CheckResult]
    phi_bounds: tuple[float, float]
    mach_form_agrees: bool

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, check in self.checks.items() if not check.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "failures": self.failures(),
            "phi_bounds": list(self.phi_bounds),
            "mach_form_agrees": self.mach_form_agrees,
            "checks": {name: check.to_dict() for name, check in self.checks.items()},
        }


_CHECK_DESCRIPTIONS = {
    "concavity": "-phi'' (wall concave)",
    "slope_bounds": "phi' (wall increasing, phi' >= phi0 > 0)",
    "varpi_decreasing": "-varpi_hat' (Mach number increasing along the wall)",
    "sonic_start": "tolerance minus |varpi_hat(x1) - 1| (sonic at P)",
    "supersonic_range": "min(varpi_hat, 1 - varpi_hat) for x > x1",
    "compatibility": "-(phi''/(1 + phi'^2) - t varpi_hat'/(kappa + varpi_hat^2))",
    "hodograph_sign": "min(a_hat, -b_hat, -d_hat)",
    "space_like": "dr/dt - lambda(t) along the wall image, t > 0",
}


def _finite_or_none(value: float) -> float | None:
    return float(value) if math.isfinite(value) else None


def _summarize(name: str, x: NDArray, margin: NDArray) -> CheckResult:
    evaluated = ~np.isnan(margin)
    if not np.any(evaluated):
        return CheckResult(name, False, math.nan, math.nan, _CHECK_DESCRIPTIONS[name])
    idx = int(np.nanargmin(np.where(evaluated, margin, np.inf)))
    passed = bool(np.all(margin[evaluated] > 0.0))
    return CheckResult(name, passed, float(margin[idx]), float(x[idx]), _CHECK_DESCRIPTIONS[name])


def check_admissibility(spec: BoundarySpec, gas: GasParams) -> AdmissibilityReport:
    """Evaluate every wall hypothesis at the wall samples.

    Failures are report entries, never exceptions. The space-like margin is not
    evaluated at the sonic point, where it degenerates.
    """
    x = spec.sample_points()
    dphi = spec.dphi(x)
    d2phi = spec.d2phi(x)
    varpi = spec.varpi_hat(x)
    dvarpi = spec.dvarpi_hat(x)
    curv = d2phi / (1.0 + dphi**2)

    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.sqrt(1.0 - varpi**2)
        data = hodograph_data(spec, gas, x)
        compat = -(curv - t * dvarpi / (gas.kappa + varpi**2))

        mach = 1.0 / varpi
        dmach = -dvarpi / varpi**2
        compat_mach = -(
            curv
            + 2.0 * np.sqrt(mach**2 - 1.0) * dmach / (mach * (2.0 + (gas.gamma - 1.0) * mach**2))
        )

        # dr/dt along the wall image: (dr/dx) / (dt/dx) with dr/dx = -curv, dt/dx = -varpi varpi'/t
        drdt = curv * t / (varpi * dvarpi)
        interior = (x > spec.x1) & (t > 0.0)
        lam = np.full_like(x, np.nan)
        ok_t = interior & (t < 1.0)
        lam[ok_t] = char_slope_lambda(t[ok_t], gas)
        space_like = np.where(interior, drdt - lam, np.nan)

        after_p = x > spec.x1
        supersonic = np.where(after_p, np.minimum(varpi, 1.0 - varpi), np.nan)
        sonic_start = np.full_like(x, np.nan)
        sonic_start[0] = SONIC_START_TOL - abs(float(varpi[0]) - 1.0)

        hodograph_sign = np.minimum(np.minimum(data["a_hat"], -data["b_hat"]), -data["d_hat"])
        margins = {
            "concavity": -d2phi,
            "slope_bounds": dphi,
            "varpi_decreasing": -dvarpi,
            "sonic_start": sonic_start,
            "supersonic_range": supersonic,
            "compatibility": compat,
            "hodograph_sign": hodograph_sign,
            "space_like": space_like,
        }

    both = ~np.isnan(compat) & ~np.isnan(compat_mach)
    agrees = bool(np.all(np.sign(compat[both]) == np.sign(compat_mach[both])))
    checks = {name: _summarize(name, x, np.asarray(m, dtype=float)) for name, m in margins.items()}
    report = AdmissibilityReport(
        x=x,
        margins={name: np.asarray(m, dtype=float) for name, m in margins.items()},
        checks=checks,
        phi_bounds=(float(np.min(dphi)), float(np.max(dphi))),
        mach_form_agrees=agrees,
    )
    if report.passed:
        logger.info(f"Boundary '{spec.name}' admissible on [{spec.x1}, {spec.x2}]")
    else:
        logger.warning(f"Boundary '{spec.name}' fails: {', '.join(report.failures())}")
    return report


# =============================================================================
# Trace
# =============================================================================


@dataclass
class BoundaryValues:
    """Boundary data at one point of the wall image."""

    t: float
    r: float
    x_hat: float
    a_bar: float
    b_bar: float
    w_bar: float
    theta_hat: float
    varpi_hat: float


@dataclass
class BoundaryTrace:
    """Sampled boundary data and its image P'E' in the (t, r) plane.

    Sample arrays are indexed along x from P (sonic) to E. Interpolated lookups over r
    use monotone piecewise cubics; `data_at` and `foot_at_t` evaluate the closed-form
    spec exactly.

    Attributes:
        spec: The boundary description the trace was computed from.
        gas: Gas constants.
        samples: Field name -> per-sample array (see `hodograph_data`).
        theta_hat_1: Flow angle at P.
        t0: t at E.
        r0: r at E.
        m_hat0: min over samples of (a_hat, -b_hat, -d_hat).
        M_hat0: max over samples of (a_hat, -b_hat, -d_hat).
    """

    spec: BoundarySpec
    gas: GasParams
    samples: dict[str, NDArray[np.float64]]
    theta_hat_1: float
    t0: float
    r0: float
    m_hat0: float
    M_hat0: float
    _lookups: dict[str, PchipInterpolator] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        r = self.samples["r"]
        for name in ("t", "x", "a_bar", "b_bar", "w_bar", "theta_hat", "varpi_hat"):
            self._lookups[name] = PchipInterpolator(r, self.samples[name], extrapolate=False)

    @property
    def identity_defect(self) -> float:
        """max |a_hat + b_hat - 2 t d_hat| over the samples."""
        s = self.samples
        return float(np.max(np.abs(s["a_hat"] + s["b_hat"] - 2.0 * s["t"] * s["d_hat"])))

    @property
    def bar_bounds(self) -> tuple[float, float]:
        """(m0_bar, M0_bar): extrema of a_bar and b_bar over the samples."""
        both = np.concatenate([self.samples["a_bar"], self.samples["b_bar"]])
        return float(np.min(both)), float(np.max(both))

    def data_at(self, x: ArrayLike) -> dict[str, NDArray]:
        return hodograph_data(self.spec, self.gas, x)

    def foot_at_t(self, t: float) -> float:
        """Abscissa of the wall point whose image has the given t."""
        if t <= 0.0:
            return self.spec.x1
        if t >= self.t0:
            if t > self.t0 + LOOKUP_SLACK:
                raise DomainError(f"t={t:.6g} is beyond the wall image (t0={self.t0:.6g})")
            return self.spec.x2

        def residual(x: float) -> float:
            return float(hodograph_data(self.spec, self.gas, x)["t"]) - t

        return float(brentq(residual, self.spec.x1, self.spec.x2, xtol=BRENTQ_XTOL))

    def r_tilde(self, t: float) -> float:
        """r of the wall image at level t."""
        return float(hodograph_data(self.spec, self.gas, self.foot_at_t(t))["r"])

    def lookup(self, r: float) -> BoundaryValues:
        return boundary_lookup(self, r)


def compute_trace(spec: BoundarySpec, gas: GasParams) -> BoundaryTrace:
    """Sample the wall data and build its hodograph image.

    Raises:
        TraceError: If r(x) or t(x) is not strictly increasing, the image does not start
            at (0, 0), or the characteristic derivatives have the wrong sign.
    """
    x = spec.sample_points()
    data = hodograph_data(spec, gas, x)

    for name in ("t", "r"):
        steps = np.diff(data[name])
        bad = np.flatnonzero(~(steps > 0.0))
        if bad.size:
            raise TraceError(f"{name}(x) is not strictly increasing", x=float(x[bad[0] + 1]))
    if float(data["t"][0]) > SONIC_T_TOL or float(data["r"][0]) != 0.0:
        raise TraceError("wall image does not start at the sonic point (t, r) = (0, 0)", x=spec.x1)

    sign_margin = np.minimum(np.minimum(data["a_hat"], -data["b_hat"]), -data["d_hat"])
    bad = np.flatnonzero(~(sign_margin > 0.0))
    if bad.size:
        raise TraceError("characteristic derivatives violate a_hat > 0 > b_hat, d_hat", x=float(x[bad[0]]))

    stacked = np.concatenate([data["a_hat"], -data["b_hat"], -data["d_hat"]])
    trace = BoundaryTrace(
        spec=spec,
        gas=gas,
        samples=data,
        theta_hat_1=float(data["theta_hat"][0]),
        t0=float(data["t"][-1]),
        r0=float(data["r"][-1]),
        m_hat0=float(np.min(stacked)),
        M_hat0=float(np.max(stacked)),
    )
    logger.debug(
        f"Trace '{spec.name}': t0={trace.t0:.6f}, r0={trace.r0:.6f}, "
        f"identity defect={trace.identity_defect:.3e}"
    )
    return trace


def boundary_lookup(trace: BoundaryTrace, r: float) -> BoundaryValues:
    """Interpolated boundary values at hodograph coordinate r in [0, r0].

    Raises:
        DomainError: If r lies outside [0, r0].
    """
    if not (-LOOKUP_SLACK <= r <= trace.r0 + LOOKUP_SLACK):
        raise DomainError(f"r={r:.6g} outside the wall image [0, {trace.r0:.6g}]")
    r = min(max(r, 0.0), trace.r0)
    vals = {name: float(interp(r)) for name, interp in trace._lookups.items()}
    return BoundaryValues(
        t=vals["t"],
        r=r,
        x_hat=vals["x"],
        a_bar=vals["a_bar"],
        b_bar=vals["b_bar"],
        w_bar=vals["w_bar"],
        theta_hat=vals["theta_hat"],
        varpi_hat=vals["varpi_hat"],
    )
