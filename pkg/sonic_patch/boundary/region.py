"""The hodograph region P'E'D' bounded by the wall image, the characteristic from E', and t = 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from sonic_patch.boundary.trace import BoundaryTrace
from sonic_patch.errors import GeometryError
from sonic_patch.gas import GasParams, char_shift_s, char_shift_s_exact


@dataclass
class RegionGeometry:
    """Corners of the hodograph region.

    Attributes:
        t0: t at E'.
        r0: r at E'.
        s_t0: s(t0).
        r_star: r at D' = (0, r_star), r0 - s(t0).
        gas: Gas constants used for s(t).
    """

    t0: float
    r0: float
    s_t0: float
    r_star: float
    gas: GasParams

    def r_check(self, t: ArrayLike):
        """r on the positive characteristic through E': r0 - (s(t0) - s(t))."""
        out = self.r0 - (self.s_t0 - np.asarray(char_shift_s_exact(t, self.gas)))
        return float(out) if np.ndim(out) == 0 else out

    def contains(self, t: float, r: float, trace: BoundaryTrace, tol: float = 1e-12) -> bool:
        if not (-tol <= t <= self.t0 + tol):
            return False
        t = min(max(t, 0.0), self.t0)
        return trace.r_tilde(t) - tol <= r <= self.r_check(t) + tol


def region_corners(trace: BoundaryTrace, gas: GasParams) -> RegionGeometry:
    """Corners E' = (t0, r0) and D' = (0, r0 - s(t0)).

    Raises:
        GeometryError: If r_star <= 0, i.e. the characteristic from E' exits through P'.
    """
    s_t0 = char_shift_s(trace.t0, gas)
    r_star = trace.r0 - s_t0
    if r_star <= 0.0:
        raise GeometryError(
            f"characteristic from E' exits through the P' side: r*={r_star:.6g} <= 0"
        )
    return RegionGeometry(t0=trace.t0, r0=trace.r0, s_t0=s_t0, r_star=r_star, gas=gas)
