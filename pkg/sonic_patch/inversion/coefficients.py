"""Trigonometric coefficients of the inverse map.

With theta = theta_hat_1 - r and tau = sqrt(1 - t^2) (t = cos omega, tau = sin omega):

    F1 = t sin(theta) - tau cos(theta) = sin(beta)
    F2 = t sin(theta) + tau cos(theta) = sin(alpha)
    F3 = t cos(theta) + tau sin(theta) = cos(beta)
    F4 = t cos(theta) - tau sin(theta) = cos(alpha)
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sonic_patch.errors import DomainError


def f_coefficients(
    t: ArrayLike, r: ArrayLike, theta_hat_1: float
) -> tuple[NDArray, NDArray, NDArray, NDArray]:
    """(F1, F2, F3, F4) at hodograph points (t, r); t must lie in [0, 1)."""
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t >= 1.0):
        raise DomainError(f"t must lie in [0, 1), got {t}")
    theta = theta_hat_1 - np.asarray(r, dtype=float)
    tau = np.sqrt(1.0 - t * t)
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    return (
        t * sin_t - tau * cos_t,
        t * sin_t + tau * cos_t,
        t * cos_t + tau * sin_t,
        t * cos_t - tau * sin_t,
    )
