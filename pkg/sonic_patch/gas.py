from __future__ import annotations

"""Gas-dynamic state algebra for isentropic irrotational flow.

Conversions between the velocity, angle and Xi representations of a state, the
characteristic slopes, and the coefficient functions of the hodograph system:

- F(t) = (1 - t^2)(kappa + 1 - t^2)
- lambda(t) = sqrt(1 - t^2) t^2 / F(t)
- s(t) = integral of lambda from 0 to t

All functions accept scalars or numpy arrays unless noted.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad

from sonic_patch.errors import DomainError, QuadratureError

# =============================================================================
# Constants
# =============================================================================

DEFAULT_GAMMA = 1.4
DEFAULT_BERNOULLI = 6.0
DEFAULT_ENTROPY_CONST = 1.0

# Absolute tolerance requested from the adaptive quadrature of s(t)
S_QUAD_EPSABS = 1e-12
# Reported error estimates above this are treated as non-convergence
S_QUAD_MAX_ERROR = 1e-10

# |cos| below this makes a characteristic direction vertical
VERTICAL_TOL = 1e-12


@dataclass
class GasParams:
    """Polytropic gas constants.

    Attributes:
        gamma: Adiabatic index, > 1.
        bernoulli: Bernoulli constant B0 in q^2 + 2c^2/(gamma - 1) = B0.
        entropy_const: Constant A of p = A rho^gamma. Only read for density recovery.
        kappa: (gamma - 1)/2, derived.
    """

    gamma: float = DEFAULT_GAMMA
    bernoulli: float = DEFAULT_BERNOULLI
    entropy_const: float = DEFAULT_ENTROPY_CONST
    kappa: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if not self.bernoulli > 0.0:
            raise ValueError(f"bernoulli must be positive, got {self.bernoulli}")
        if not self.entropy_const > 0.0:
            raise ValueError(f"entropy_const must be positive, got {self.entropy_const}")
        self.kappa = (self.gamma - 1.0) / 2.0

    @property
    def sonic_speed(self) -> float:
        """Speed at which q = c under this Bernoulli constant."""
        return math.sqrt(self.kappa * self.bernoulli / (1.0 + self.kappa))


@dataclass
class AngleState:
    """A flow state in angle variables.

    Attributes:
        theta: Flow angle, radians.
        omega: Mach angle in (0, pi/2].
        varpi: sin(omega), in (0, 1].
        mach: 1/varpi.
        alpha: theta + omega, inclination of the positive characteristic.
        beta: theta - omega, inclination of the negative characteristic.
        xi: (1/4 kappa) ln(varpi^2 / (kappa + varpi^2)).
    """

    theta: float
    omega: float
    varpi: float
    mach: float
    alpha: float
    beta: float
    xi: float

    @classmethod
    def from_angles(cls, theta: float, varpi: float, gas: GasParams) -> AngleState:
        _check_varpi(varpi)
        omega = math.asin(min(varpi, 1.0))
        return cls(
            theta=theta,
            omega=omega,
            varpi=varpi,
            mach=1.0 / varpi,
            alpha=theta + omega,
            beta=theta - omega,
            xi=float(xi_of_varpi(varpi, gas)),
        )

    @property
    def is_sonic(self) -> bool:
        return self.varpi == 1.0


@dataclass
class VelocityState:
    """A flow state in velocity variables.

    Attributes:
        u: Horizontal velocity.
        v: Vertical velocity.
        c: Sound speed.
        q: Flow speed sqrt(u^2 + v^2).
        rho: Density from c^2 = A gamma rho^(gamma - 1), when recovered.
    """

    u: float
    v: float
    c: float
    q: float
    rho: float | None = None

    def bernoulli_defect(self, gas: GasParams) -> float:
        """Relative defect of q^2 + 2c^2/(gamma - 1) = B0."""
        lhs = self.q**2 + self.c**2 / gas.kappa
        return abs(lhs - gas.bernoulli) / gas.bernoulli


@dataclass
class CharacteristicSlope:
    """Slope of a characteristic direction, tagged when the direction is vertical.

    Attributes:
        value: tan of the inclination; nan when vertical.
        vertical: True if the direction is vertical and `value` carries no slope.
    """

    value: float
    vertical: bool = False

    @classmethod
    def from_angle(cls, angle: float) -> CharacteristicSlope:
        if abs(math.cos(angle)) < VERTICAL_TOL:
            return cls(value=math.nan, vertical=True)
        return cls(value=math.tan(angle))


# =============================================================================
# State conversions
# =============================================================================


def _check_varpi(varpi: ArrayLike) -> None:
    arr = np.asarray(varpi, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError(f"varpi must lie in (0, 1], got {varpi}")


def _check_t(t: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError(f"t must lie in [0, 1), got {t}")
    return arr


def sound_speed(q: float, gas: GasParams) -> float:
    """Sound speed from the Bernoulli law; rejects non-physical speeds."""
    c2 = gas.kappa * (gas.bernoulli - q * q)
    if c2 <= 0.0:
        raise DomainError(f"non-physical state: q^2={q * q:.6g} >= B0={gas.bernoulli:.6g}")
    return math.sqrt(c2)


def angles_from_velocity(
    u: float, v: float, gas: GasParams, sonic_tol: float = 1e-12
) -> AngleState:
    """Convert a supersonic or sonic velocity to angle variables.

    Args:
        u: Horizontal velocity.
        v: Vertical velocity.
        gas: Gas constants.
        sonic_tol: Relative slack accepted below q = c before calling the state subsonic.

    Raises:
        DomainError: If q = 0, the state is non-physical, or it is subsonic.
    """
    q = math.hypot(u, v)
    if q <= 0.0:
        raise DomainError("stagnation state has no flow angle")
    c = sound_speed(q, gas)
    if q < c * (1.0 - sonic_tol):
        raise DomainError(f"subsonic state: q={q:.6g} < c={c:.6g}")
    varpi = min(c / q, 1.0)
    return AngleState.from_angles(math.atan2(v, u), varpi, gas)


def velocity_from_angles(theta: float, varpi: float, gas: GasParams) -> VelocityState:
    """Convert angle variables back to a velocity state.

    c^2 = kappa B0 varpi^2 / (kappa + varpi^2) follows from eliminating q = c/varpi
    in the Bernoulli law.
    """
    _check_varpi(varpi)
    c = math.sqrt(gas.kappa * gas.bernoulli * varpi**2 / (gas.kappa + varpi**2))
    q = c / varpi
    rho = (c * c / (gas.entropy_const * gas.gamma)) ** (1.0 / (gas.gamma - 1.0))
    return VelocityState(u=q * math.cos(theta), v=q * math.sin(theta), c=c, q=q, rho=rho)


def eigenvalues(state: AngleState) -> tuple[CharacteristicSlope, CharacteristicSlope]:
    """Characteristic slopes (tan(theta + omega), tan(theta - omega))."""
    return CharacteristicSlope.from_angle(state.alpha), CharacteristicSlope.from_angle(state.beta)


def eigenvalues_from_velocity(
    u: float, v: float, c: float
) -> tuple[CharacteristicSlope, CharacteristicSlope]:
    """Characteristic slopes from the quotient form (uv +- c sqrt(q^2 - c^2)) / (u^2 - c^2)."""
    q2 = u * u + v * v
    if q2 < c * c:
        raise DomainError("subsonic state has no real characteristics")
    root = c * math.sqrt(q2 - c * c)
    denom = u * u - c * c
    if abs(denom) < VERTICAL_TOL * q2:
        # u^2 = c^2: one root of the characteristic quadratic is at infinity
        vertical = CharacteristicSlope(math.nan, vertical=True)
        if u * v == 0.0:
            return vertical, vertical
        other = CharacteristicSlope((v * v - c * c) / (2.0 * u * v))
        return (vertical, other) if u * v > 0.0 else (other, vertical)
    return (
        CharacteristicSlope((u * v + root) / denom),
        CharacteristicSlope((u * v - root) / denom),
    )


# =============================================================================
# Hodograph coefficient functions
# =============================================================================


def coefficient_F(t: ArrayLike, gas: GasParams):
    """F(t) = (1 - t^2)(kappa + 1 - t^2), positive on [0, 1)."""
    arr = _check_t(t)
    out = (1.0 - arr**2) * (gas.kappa + 1.0 - arr**2)
    return float(out) if out.ndim == 0 else out


def char_slope_lambda(t: ArrayLike, gas: GasParams):
    """lambda(t) = sqrt(1 - t^2) t^2 / F(t), the characteristic speed in the (t, r) plane."""
    arr = _check_t(t)
    out = np.sqrt(1.0 - arr**2) * arr**2 / ((1.0 - arr**2) * (gas.kappa + 1.0 - arr**2))
    return float(out) if out.ndim == 0 else out


def lambda_bracket(t0: float, gas: GasParams) -> tuple[float, float]:
    """Bounds k_lo, k_hi with k_lo t^2 <= lambda(t) <= k_hi t^2 for t in [0, t0]."""
    _check_t(t0)
    return 1.0 / (gas.kappa + 1.0), 1.0 / (gas.kappa * math.sqrt(1.0 - t0 * t0))


def char_shift_s(t: float, gas: GasParams) -> float:
    """s(t) = integral_0^t lambda, by adaptive quadrature.

    Raises:
        QuadratureError: If the reported error estimate exceeds S_QUAD_MAX_ERROR.
    """
    t = float(_check_t(t))
    if t == 0.0:
        return 0.0
    return _quad_segment(0.0, t, gas)


def char_shift_s_exact(t: ArrayLike, gas: GasParams):
    """Closed form of s(t): arctan(a tan u)/a - u with u = arcsin t, a = sqrt(kappa/(kappa+1))."""
    arr = _check_t(t)
    a = math.sqrt(gas.kappa / (gas.kappa + 1.0))
    u = np.arcsin(arr)
    out = np.arctan(a * np.tan(u)) / a - u
    return float(out) if out.ndim == 0 else out


def char_shift_table(ts: ArrayLike, gas: GasParams) -> NDArray[np.float64]:
    """s at each of `ts`, accumulated by quadrature over consecutive sorted points."""
    arr = _check_t(ts).reshape(-1)
    order = np.argsort(arr)
    sorted_t = arr[order]
    out_sorted = np.empty_like(sorted_t)
    prev_t, acc = 0.0, 0.0
    for i, ti in enumerate(sorted_t):
        if ti > prev_t:
            acc += _quad_segment(prev_t, ti, gas)
        out_sorted[i] = acc
        prev_t = max(prev_t, ti)
    out = np.empty_like(out_sorted)
    out[order] = out_sorted
    return out


def _quad_segment(t_lo: float, t_hi: float, gas: GasParams) -> float:
    value, abserr = quad(
        lambda tau: char_slope_lambda(tau, gas),
        t_lo,
        t_hi,
        epsabs=S_QUAD_EPSABS,
        epsrel=S_QUAD_EPSABS,
        limit=200,
    )
    if not math.isfinite(value) or abserr > S_QUAD_MAX_ERROR:
        raise QuadratureError(f"s on [{t_lo:.6g}, {t_hi:.6g}] did not converge")
    return float(value)


# =============================================================================
# Xi representation
# =============================================================================


def xi_of_varpi(varpi: ArrayLike, gas: GasParams):
    """Xi = (1/4 kappa) ln(varpi^2 / (kappa + varpi^2)); strictly increasing in varpi."""
    _check_varpi(varpi)
    arr = np.asarray(varpi, dtype=float)
    out = np.log(arr**2 / (gas.kappa + arr**2)) / (4.0 * gas.kappa)
    return float(out) if out.ndim == 0 else out


def dxi_dvarpi(varpi: ArrayLike, gas: GasParams):
    """Derivative of Xi: 1 / (2 varpi (kappa + varpi^2))."""
    _check_varpi(varpi)
    arr = np.asarray(varpi, dtype=float)
    out = 1.0 / (2.0 * arr * (gas.kappa + arr**2))
    return float(out) if out.ndim == 0 else out


# =============================================================================
# Bound constants
# =============================================================================


def growth_constant(t0: float, gas: GasParams) -> float:
    """k0 = (kappa + 2) / (kappa - kappa t0^2)."""
    _check_t(t0)
    return (gas.kappa + 2.0) / (gas.kappa * (1.0 - t0 * t0))


def degenerate_layer_width(t0: float, gas: GasParams) -> float:
    """eps0 = min(t0, 1/(4 k0)), the width of the layer next to t = 0."""
    return min(t0, 1.0 / (4.0 * growth_constant(t0, gas)))
