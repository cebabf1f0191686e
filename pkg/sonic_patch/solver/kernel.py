"""Right-hand sides of the characteristic system for (U_bar, V_bar).

Along the positive characteristic dr/dt = lambda(t) (derivative d+ = d_t + lambda d_r):

    d+ U = (U - V)/(2t) + (kappa + 2 - t^2)/(2F) (U - V) t - (kappa + 2 - 2t^2)/F U t

and along the negative characteristic dr/dt = -lambda(t) (d- = d_t - lambda d_r):

    d- V = (V - U)/(2t) - (kappa + 2 - t^2)/(2F) (U - V) t - (kappa + 2 - 2t^2)/F V t

Both are singular like 1/t at the sonic line; callers only evaluate them for t > 0.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sonic_patch.gas import GasParams


def _coefficients(t: NDArray, gas: GasParams) -> tuple[NDArray, NDArray]:
    F = (1.0 - t * t) * (gas.kappa + 1.0 - t * t)
    return (gas.kappa + 2.0 - t * t) / (2.0 * F), (gas.kappa + 2.0 - 2.0 * t * t) / F


def rhs_plus(t: ArrayLike, u_bar: ArrayLike, v_bar: ArrayLike, gas: GasParams) -> NDArray:
    t, u, v = (np.asarray(a, dtype=float) for a in (t, u_bar, v_bar))
    half, full = _coefficients(t, gas)
    diff = u - v
    return diff / (2.0 * t) + half * diff * t - full * u * t


def rhs_minus(t: ArrayLike, u_bar: ArrayLike, v_bar: ArrayLike, gas: GasParams) -> NDArray:
    t, u, v = (np.asarray(a, dtype=float) for a in (t, u_bar, v_bar))
    half, full = _coefficients(t, gas)
    diff = u - v
    return -diff / (2.0 * t) - half * diff * t - full * v * t


def transport_rhs(
    t: ArrayLike, u_bar: ArrayLike, v_bar: ArrayLike, s_field: ArrayLike, gas: GasParams
) -> NDArray:
    """d+ W_bar = (t^2/F)(U - V) - (2 sqrt(1 - t^2)/F) S, with S = t dV/dr.

    Regular at t = 0, where U = V and the first term vanishes.
    """
    t, u, v, s = (np.asarray(a, dtype=float) for a in (t, u_bar, v_bar, s_field))
    F = (1.0 - t * t) * (gas.kappa + 1.0 - t * t)
    return (t * t / F) * (u - v) - (2.0 * np.sqrt(1.0 - t * t) / F) * s
