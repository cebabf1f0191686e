"""Boundary streamline description: the wall y = phi(x) and the profile varpi_hat(x)."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

CurveFn = Callable[[ArrayLike], NDArray[np.float64]]

MIN_SAMPLES = 16


def _vectorize(fn: Callable[[ArrayLike], Any]) -> CurveFn:
    def wrapped(x: ArrayLike) -> NDArray[np.float64]:
        arr = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(fn(arr), dtype=float), arr.shape).copy()

    return wrapped


@dataclass
class BoundarySpec:
    """Wall and Mach data on the arc PE, x in [x1, x2].

    Attributes:
        x1: Abscissa of the sonic point P.
        x2: Abscissa of the end point E.
        phi: Wall ordinate y = phi(x).
        dphi: phi'(x).
        d2phi: phi''(x).
        varpi_hat: sin of the Mach angle along the wall, 1/M(x).
        dvarpi_hat: varpi_hat'(x).
        n_samples: Number of uniformly spaced samples used for the trace.
        name: Preset id or "table".
        params: Parameters the boundary was built from, for reports.
    """

    x1: float
    x2: float
    phi: CurveFn
    dphi: CurveFn
    d2phi: CurveFn
    varpi_hat: CurveFn
    dvarpi_hat: CurveFn
    n_samples: int = 401
    name: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.x2 > self.x1:
            raise ValueError(f"x2 must exceed x1, got [{self.x1}, {self.x2}]")
        if self.n_samples < MIN_SAMPLES:
            raise ValueError(f"n_samples must be at least {MIN_SAMPLES}, got {self.n_samples}")
        for name in ("phi", "dphi", "d2phi", "varpi_hat", "dvarpi_hat"):
            setattr(self, name, _vectorize(getattr(self, name)))

    def sample_points(self) -> NDArray[np.float64]:
        return np.linspace(self.x1, self.x2, self.n_samples)

    @classmethod
    def from_mach_profile(
        cls,
        x1: float,
        x2: float,
        phi: CurveFn,
        dphi: CurveFn,
        d2phi: CurveFn,
        mach: CurveFn,
        dmach: CurveFn,
        n_samples: int = 401,
    ) -> BoundarySpec:
        """Build from a Mach profile M(x): varpi_hat = 1/M, varpi_hat' = -M'/M^2."""
        return cls(
            x1=x1,
            x2=x2,
            phi=phi,
            dphi=dphi,
            d2phi=d2phi,
            varpi_hat=lambda x: 1.0 / np.asarray(mach(x)),
            dvarpi_hat=lambda x: -np.asarray(dmach(x)) / np.asarray(mach(x)) ** 2,
            n_samples=n_samples,
        )
