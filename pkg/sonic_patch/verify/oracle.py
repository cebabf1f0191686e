from __future__ import annotations

"""Exact isentropic irrotational flows used as analytic oracles.

Two closed-form families cross the sonic line on the unit circle:

- compressible potential vortex: u = -G y / rho^2, v = G x / rho^2, supersonic for
  rho < 1 when G = sqrt(kappa B0 / (1 + kappa));
- compressible source: radial speed q(rho) on the supersonic branch of
  c(q)^(1/kappa) q rho = const, sonic at rho = 1.

Both provide analytic first derivatives, so the characteristic equations can be checked
on them without any solver code.
"""

import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import brentq

from sonic_patch.gas import GasParams

logger = logging.getLogger(__name__)

ANALYTIC_TOL = 1e-8
SELF_TEST_TOL = 1e-10
SONIC_MARGIN = 1e-12
COMMUTATOR_STEP = 1e-3


def derive_seed(key: str, seed: int = 0) -> int:
    """Stable integer seed from a string key (first 16 hex chars of SHA-256)."""
    digest = hashlib.sha256(f"{key}:{seed}".encode()).hexdigest()
    return int(digest[:16], 16)


@dataclass
class OracleField:
    """Exact flow samples with analytic first derivatives.

    Attributes:
        x, y: Sample positions.
        u, v, c: Velocity and sound speed.
        u_x, u_y, v_x, v_y, c_x, c_y: First derivatives.
        provenance: Flow family and parameters.
    """

    x: NDArray[np.float64]
    y: NDArray[np.float64]
    u: NDArray[np.float64]
    v: NDArray[np.float64]
    c: NDArray[np.float64]
    u_x: NDArray[np.float64]
    u_y: NDArray[np.float64]
    v_x: NDArray[np.float64]
    v_y: NDArray[np.float64]
    c_x: NDArray[np.float64]
    c_y: NDArray[np.float64]
    provenance: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.x.size)

    def subset(self, keep: NDArray[np.bool_]) -> OracleField:
        arrays = {
            name: getattr(self, name)[keep]
            for name in ("x", "y", "u", "v", "c", "u_x", "u_y", "v_x", "v_y", "c_x", "c_y")
        }
        return OracleField(**arrays, provenance=dict(self.provenance))


class ExactFlow:
    """Base for radially symmetric exact flows: subclasses supply velocity and derivatives."""

    name = "exact"

    def __init__(self, gas: GasParams):
        self.gas = gas

    def radius_range(self) -> tuple[float, float]:
        raise NotImplementedError

    def evaluate(self, x: NDArray, y: NDArray) -> dict[str, NDArray]:
        raise NotImplementedError

    def params(self) -> dict[str, Any]:
        return {"gamma": self.gas.gamma, "bernoulli": self.gas.bernoulli}

    def field(
        self,
        n: int,
        seed: int = 0,
        radius_range: tuple[float, float] | None = None,
    ) -> OracleField:
        """n samples placed uniformly in radius and angle (deterministic in seed)."""
        lo, hi = radius_range or self.radius_range()
        rng = np.random.default_rng(derive_seed(self.name, seed))
        radius = rng.uniform(lo, hi, n)
        angle = rng.uniform(0.0, 2.0 * math.pi, n)
        x, y = radius * np.cos(angle), radius * np.sin(angle)
        values = self.evaluate(x, y)
        return OracleField(
            x=x,
            y=y,
            **values,
            provenance={"family": self.name, **self.params(), "radius_range": [lo, hi], "seed": seed},
        )


class VortexFlow(ExactFlow):
    """Compressible potential vortex, sonic on the unit circle."""

    name = "vortex"

    def __init__(self, gas: GasParams):
        super().__init__(gas)
        self.circulation = math.sqrt(gas.kappa * gas.bernoulli / (1.0 + gas.kappa))

    def radius_range(self) -> tuple[float, float]:
        # Limit circle q^2 = B0 sits at rho = G / sqrt(B0)
        return 1.05 * self.circulation / math.sqrt(self.gas.bernoulli), 0.95

    def params(self) -> dict[str, Any]:
        return {**super().params(), "circulation": self.circulation}

    def evaluate(self, x: NDArray, y: NDArray) -> dict[str, NDArray]:
        G, kappa = self.circulation, self.gas.kappa
        rho2 = x * x + y * y
        rho4 = rho2 * rho2
        c = np.sqrt(kappa * (self.gas.bernoulli - G * G / rho2))
        shear = G * (y * y - x * x) / rho4
        return {
            "u": -G * y / rho2,
            "v": G * x / rho2,
            "c": c,
            "u_x": 2.0 * G * x * y / rho4,
            "u_y": shear,
            "v_x": shear.copy(),
            "v_y": -2.0 * G * x * y / rho4,
            "c_x": kappa * G * G * x / (c * rho4),
            "c_y": kappa * G * G * y / (c * rho4),
        }


class SourceFlow(ExactFlow):
    """Compressible source flow on its supersonic branch, sonic on the unit circle."""

    name = "source"

    def __init__(self, gas: GasParams):
        super().__init__(gas)
        self.sonic_speed = gas.sonic_speed
        self.mass_flux = self.sonic_speed ** (1.0 / gas.kappa) * self.sonic_speed

    def radius_range(self) -> tuple[float, float]:
        return 1.05, 3.0

    def params(self) -> dict[str, Any]:
        return {**super().params(), "mass_flux": self.mass_flux}

    def _speed(self, rho: float) -> float:
        gas = self.gas
        q_max = math.sqrt(gas.bernoulli)

        def flux_defect(q: float) -> float:
            c = math.sqrt(max(gas.kappa * (gas.bernoulli - q * q), 0.0))
            return c ** (1.0 / gas.kappa) * q * rho - self.mass_flux

        return float(brentq(flux_defect, self.sonic_speed, q_max * (1.0 - 1e-15), xtol=1e-15))

    def evaluate(self, x: NDArray, y: NDArray) -> dict[str, NDArray]:
        kappa = self.gas.kappa
        rho = np.hypot(x, y)
        q = np.array([self._speed(float(rr)) for rr in np.ravel(rho)]).reshape(rho.shape)
        c = np.sqrt(kappa * (self.gas.bernoulli - q * q))
        dq = q * c * c / (rho * (q * q - c * c))
        dc = -kappa * q * dq / c
        rho2, rho3 = rho * rho, rho**3
        cross = dq * x * y / rho2 - q * x * y / rho3
        return {
            "u": q * x / rho,
            "v": q * y / rho,
            "c": c,
            "u_x": dq * x * x / rho2 + q * y * y / rho3,
            "u_y": cross,
            "v_x": cross.copy(),
            "v_y": dq * y * y / rho2 + q * x * x / rho3,
            "c_x": dc * x / rho,
            "c_y": dc * y / rho,
        }


def exact_flows(gas: GasParams) -> list[ExactFlow]:
    return [VortexFlow(gas), SourceFlow(gas)]


# =============================================================================
# Residual assembly
# =============================================================================


def _angle_gradients(values: dict[str, NDArray]) -> dict[str, NDArray]:
    """theta, omega, varpi and their x, y derivatives from (u, v, c) and first derivatives."""
    u, v, c = values["u"], values["v"], values["c"]
    q2 = u * u + v * v
    q = np.sqrt(q2)
    out: dict[str, NDArray] = {"theta": np.arctan2(v, u), "varpi": c / q}
    out["omega"] = np.arcsin(np.minimum(out["varpi"], 1.0))
    root = np.sqrt(1.0 - out["varpi"] ** 2)
    for d in ("x", "y"):
        u_d, v_d, c_d = values[f"u_{d}"], values[f"v_{d}"], values[f"c_{d}"]
        q_d = (u * u_d + v * v_d) / q
        out[f"theta_{d}"] = (u * v_d - v * u_d) / q2
        out[f"varpi_{d}"] = c_d / q - c * q_d / q2
        out[f"omega_{d}"] = out[f"varpi_{d}"] / root
    return out


def _directional(ang: dict[str, NDArray], name: str, angle: NDArray) -> NDArray:
    return np.cos(angle) * ang[f"{name}_x"] + np.sin(angle) * ang[f"{name}_y"]


def _commutator_residual(flow: ExactFlow, fld: OracleField, h: float) -> float:
    """max |[d-, d+] theta - (coefficient form)| with outer derivatives by central differences."""
    base = _angle_gradients(flow.evaluate(fld.x, fld.y))
    alpha = base["theta"] + base["omega"]
    beta = base["theta"] - base["omega"]

    def derivative_fields(x: NDArray, y: NDArray) -> tuple[NDArray, NDArray]:
        ang = _angle_gradients(flow.evaluate(x, y))
        a = ang["theta"] + ang["omega"]
        b = ang["theta"] - ang["omega"]
        return _directional(ang, "theta", a), _directional(ang, "theta", b)

    xp, xm = derivative_fields(fld.x + h, fld.y), derivative_fields(fld.x - h, fld.y)
    yp, ym = derivative_fields(fld.x, fld.y + h), derivative_fields(fld.x, fld.y - h)
    plus_x, minus_x = (xp[0] - xm[0]) / (2 * h), (xp[1] - xm[1]) / (2 * h)
    plus_y, minus_y = (yp[0] - ym[0]) / (2 * h), (yp[1] - ym[1]) / (2 * h)

    lhs = (np.cos(beta) * plus_x + np.sin(beta) * plus_y) - (
        np.cos(alpha) * minus_x + np.sin(alpha) * minus_y
    )
    alpha_x = base["theta_x"] + base["omega_x"]
    alpha_y = base["theta_y"] + base["omega_y"]
    beta_x = base["theta_x"] - base["omega_x"]
    beta_y = base["theta_y"] - base["omega_y"]
    d_minus_alpha = np.cos(beta) * alpha_x + np.sin(beta) * alpha_y
    d_plus_beta = np.cos(alpha) * beta_x + np.sin(alpha) * beta_y
    two_omega = 2.0 * base["omega"]
    d_plus_f = _directional(base, "theta", alpha)
    d_minus_f = _directional(base, "theta", beta)
    rhs = (
        (np.cos(two_omega) * d_minus_alpha - d_plus_beta) * d_plus_f
        + (np.cos(two_omega) * d_plus_beta - d_minus_alpha) * d_minus_f
    ) / np.sin(two_omega)
    return float(np.max(np.abs(lhs - rhs)))


@dataclass
class OracleReport:
    """Residuals of one exact flow's samples.

    Attributes:
        family: Flow family name.
        n_samples: Supersonic samples checked.
        n_skipped: Samples at or below sonic that were skipped.
        residuals: Residual name -> max abs value.
        commutator: Residuals at h and h/2 and their ratio.
        passed: True if every analytic residual is below ANALYTIC_TOL and the self-test
            quantities below SELF_TEST_TOL.
    """

    family: str
    n_samples: int
    n_skipped: int
    residuals: dict[str, float]
    commutator: dict[str, float]
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "n_samples": self.n_samples,
            "n_skipped": self.n_skipped,
            "residuals": self.residuals,
            "commutator": self.commutator,
            "passed": self.passed,
        }


def field_invariants(fld: OracleField, gas: GasParams) -> dict[str, float]:
    """Bernoulli (relative), irrotationality and potential-equation residuals."""
    u, v, c = fld.u, fld.v, fld.c
    bernoulli = np.abs(u * u + v * v + c * c / gas.kappa - gas.bernoulli) / gas.bernoulli
    potential = (c * c - u * u) * fld.u_x - u * v * (fld.u_y + fld.v_x) + (c * c - v * v) * fld.v_y
    return {
        "bernoulli": float(np.max(bernoulli)),
        "irrotational": float(np.max(np.abs(fld.u_y - fld.v_x))),
        "potential": float(np.max(np.abs(potential))),
    }


def analytic_oracle_residuals(
    fld: OracleField, gas: GasParams, flow: ExactFlow | None = None
) -> OracleReport:
    """Check both characteristic forms of the flow equations on exact data.

    Velocity form: d+ u + Lambda_- d+ v = 0 and d- u + Lambda_+ d- v = 0 with
    d+- = d_x + Lambda_+- d_y. Angle form: d+ theta + sin(2 omega) d+ Xi = 0 and
    d- theta - sin(2 omega) d- Xi = 0 along the unit characteristic directions.

    Args:
        fld: Samples; those with q <= c are skipped.
        gas: Gas constants the field was generated with.
        flow: If given, the commutator identity is checked by differencing this flow.
    """
    q = np.hypot(fld.u, fld.v)
    keep = q > fld.c * (1.0 + SONIC_MARGIN)
    n_skipped = int(np.count_nonzero(~keep))
    if n_skipped:
        logger.warning(f"Skipped {n_skipped} sample(s) at or below sonic")
    fld = fld.subset(keep)

    values = {name: getattr(fld, name) for name in ("u", "v", "c", "u_x", "u_y", "v_x", "v_y", "c_x", "c_y")}
    ang = _angle_gradients(values)
    alpha = ang["theta"] + ang["omega"]
    beta = ang["theta"] - ang["omega"]
    lam_plus, lam_minus = np.tan(alpha), np.tan(beta)

    def along(name: str, slope: NDArray) -> NDArray:
        return values[f"{name}_x"] + slope * values[f"{name}_y"]

    char_plus = along("u", lam_plus) + lam_minus * along("v", lam_plus)
    char_minus = along("u", lam_minus) + lam_plus * along("v", lam_minus)

    varpi = ang["varpi"]
    dxi = 1.0 / (2.0 * varpi * (gas.kappa + varpi**2))
    sin2w = np.sin(2.0 * ang["omega"])
    angle_plus = _directional(ang, "theta", alpha) + sin2w * dxi * _directional(ang, "varpi", alpha)
    angle_minus = _directional(ang, "theta", beta) - sin2w * dxi * _directional(ang, "varpi", beta)

    # Velocity-form residuals are scaled so steep characteristics do not dominate
    scale_plus = 1.0 + np.abs(lam_plus) + np.abs(lam_minus * lam_plus)
    scale_minus = 1.0 + np.abs(lam_minus) + np.abs(lam_plus * lam_minus)
    residuals = {
        "velocity_plus": float(np.max(np.abs(char_plus) / scale_plus)),
        "velocity_minus": float(np.max(np.abs(char_minus) / scale_minus)),
        "angle_plus": float(np.max(np.abs(angle_plus))),
        "angle_minus": float(np.max(np.abs(angle_minus))),
        **field_invariants(fld, gas),
    }

    commutator: dict[str, float] = {}
    if flow is not None and len(fld):
        coarse = _commutator_residual(flow, fld, COMMUTATOR_STEP)
        fine = _commutator_residual(flow, fld, COMMUTATOR_STEP / 2.0)
        commutator = {"h": COMMUTATOR_STEP, "coarse": coarse, "fine": fine, "ratio": coarse / fine}

    analytic = ("velocity_plus", "velocity_minus", "angle_plus", "angle_minus")
    passed = all(residuals[name] < ANALYTIC_TOL for name in analytic) and all(
        residuals[name] < SELF_TEST_TOL for name in ("bernoulli", "irrotational")
    )
    family = str(fld.provenance.get("family", "unknown"))
    return OracleReport(family, len(fld), n_skipped, residuals, commutator, passed)


def self_test(gas: GasParams, n: int = 1000, seed: int = 0) -> dict[str, dict[str, float]]:
    """Bernoulli, irrotationality and potential-equation residuals of every exact family."""
    results = {}
    for flow in exact_flows(gas):
        results[flow.name] = field_invariants(flow.field(n, seed), gas)
    return results


def run_oracle_checks(gas: GasParams, n: int = 1000, seed: int = 0) -> list[OracleReport]:
    """Sample every exact family and check it, commutator included."""
    reports = []
    for flow in exact_flows(gas):
        report = analytic_oracle_residuals(flow.field(n, seed), gas, flow=flow)
        level = logging.INFO if report.passed else logging.WARNING
        logger.log(level, f"Oracle '{flow.name}': passed={report.passed}, residuals={report.residuals}")
        reports.append(report)
    return reports
