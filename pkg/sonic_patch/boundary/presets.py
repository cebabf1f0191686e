"""Closed-form boundary presets.

Admissible presets use a parabolic wall phi(x) = slope x + curvature x^2 / 2, which is
increasing and concave for the default parameters. Counterexamples break exactly one
admissibility hypothesis each.
"""

from __future__ import annotations

import numpy as np

from sonic_patch.boundary.spec import BoundarySpec
from sonic_patch.registry import register_preset


def _parabolic_wall(slope: float, curvature: float):
    return (
        lambda x: slope * x + 0.5 * curvature * x**2,
        lambda x: slope + curvature * x,
        lambda x: curvature + 0.0 * x,
    )


def _linear_varpi(start: float, varpi_slope: float):
    return (
        lambda x: start + varpi_slope * x,
        lambda x: varpi_slope + 0.0 * x,
    )


@register_preset(
    preset_id="reference",
    description="phi' = 1 - 0.4x, varpi_hat = 1 - 0.5x on [0, 0.12]; gamma = 1.4, B0 = 6",
    defaults={
        "x2": 0.12,
        "slope": 1.0,
        "curvature": -0.4,
        "varpi_slope": -0.5,
        "n_samples": 401,
    },
)
def reference(
    x2: float, slope: float, curvature: float, varpi_slope: float, n_samples: float
) -> BoundarySpec:
    phi, dphi, d2phi = _parabolic_wall(slope, curvature)
    varpi, dvarpi = _linear_varpi(1.0, varpi_slope)
    return BoundarySpec(
        x1=0.0,
        x2=x2,
        phi=phi,
        dphi=dphi,
        d2phi=d2phi,
        varpi_hat=varpi,
        dvarpi_hat=dvarpi,
        n_samples=int(n_samples),
    )


@register_preset(
    preset_id="rational_mach",
    description="Parabolic wall with Mach profile M = 1 + m x (varpi_hat = 1/(1 + m x))",
    defaults={
        "x2": 0.1,
        "slope": 1.0,
        "curvature": -0.4,
        "mach_slope": 0.6,
        "n_samples": 401,
    },
)
def rational_mach(
    x2: float, slope: float, curvature: float, mach_slope: float, n_samples: float
) -> BoundarySpec:
    phi, dphi, d2phi = _parabolic_wall(slope, curvature)
    return BoundarySpec.from_mach_profile(
        x1=0.0,
        x2=x2,
        phi=phi,
        dphi=dphi,
        d2phi=d2phi,
        mach=lambda x: 1.0 + mach_slope * x,
        dmach=lambda x: mach_slope + 0.0 * x,
        n_samples=int(n_samples),
    )


@register_preset(
    preset_id="flat_wall",
    category="counterexample",
    violates="concavity",
    description="Straight wall (phi'' = 0) with the reference Mach data",
    defaults={"x2": 0.12, "slope": 1.0, "varpi_slope": -0.5, "n_samples": 201},
)
def flat_wall(x2: float, slope: float, varpi_slope: float, n_samples: float) -> BoundarySpec:
    phi, dphi, d2phi = _parabolic_wall(slope, 0.0)
    varpi, dvarpi = _linear_varpi(1.0, varpi_slope)
    return BoundarySpec(
        x1=0.0,
        x2=x2,
        phi=phi,
        dphi=dphi,
        d2phi=d2phi,
        varpi_hat=varpi,
        dvarpi_hat=dvarpi,
        n_samples=int(n_samples),
    )


@register_preset(
    preset_id="late_sonic",
    category="counterexample",
    violates="sonic_start",
    description="Reference wall whose Mach data start supersonic (varpi_hat(x1) = 0.9)",
    defaults={"x2": 0.12, "start": 0.9, "varpi_slope": -0.5, "n_samples": 201},
)
def late_sonic(x2: float, start: float, varpi_slope: float, n_samples: float) -> BoundarySpec:
    phi, dphi, d2phi = _parabolic_wall(1.0, -0.4)
    varpi, dvarpi = _linear_varpi(start, varpi_slope)
    return BoundarySpec(
        x1=0.0,
        x2=x2,
        phi=phi,
        dphi=dphi,
        d2phi=d2phi,
        varpi_hat=varpi,
        dvarpi_hat=dvarpi,
        n_samples=int(n_samples),
    )


@register_preset(
    preset_id="overextended",
    category="counterexample",
    violates="compatibility",
    description="Reference data continued to x2 = 0.25, where the compatibility margin turns",
    defaults={"x2": 0.25, "n_samples": 401},
)
def overextended(x2: float, n_samples: float) -> BoundarySpec:
    return reference(x2=x2, slope=1.0, curvature=-0.4, varpi_slope=-0.5, n_samples=n_samples)


@register_preset(
    preset_id="exponential_wall",
    description="Wall (1 - exp(-k x))/k (phi' = exp(-k x)) with varpi_hat = 1 - 0.5x",
    defaults={"x2": 0.12, "depth": 0.4, "varpi_slope": -0.5, "n_samples": 401},
)
def exponential_wall(
    x2: float, depth: float, varpi_slope: float, n_samples: float
) -> BoundarySpec:
    varpi, dvarpi = _linear_varpi(1.0, varpi_slope)
    return BoundarySpec(
        x1=0.0,
        x2=x2,
        phi=lambda x: (1.0 - np.exp(-depth * x)) / depth,
        dphi=lambda x: np.exp(-depth * x),
        d2phi=lambda x: -depth * np.exp(-depth * x),
        varpi_hat=varpi,
        dvarpi_hat=dvarpi,
        n_samples=int(n_samples),
    )
