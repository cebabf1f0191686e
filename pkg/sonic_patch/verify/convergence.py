from __future__ import annotations

"""Refinement study of a full patch solve.

The solve is repeated with dt halved at each level and a fixed t_min, so the last
marched levels of all runs lie within dt0 of each other. Observed orders are log2 of
successive error ratios for

- the discrete flow residual on the physical mesh,
- the DE secant slope against tan(beta),
- the closure defect at the last marched level.

PE reproduction does not refine: the wall data at each PE point must map back to its mesh
level and diagonal r to root-finding precision at every dt, so it is a fixed-tolerance
check instead of an order.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any

from sonic_patch.boundary.spec import BoundarySpec
from sonic_patch.config import DEFAULT_RESIDUAL_T_FLOOR, SolverParams
from sonic_patch.gas import GasParams
from sonic_patch.inversion.invariants import PE_TOL
from sonic_patch.pipeline import solve_patch

logger = logging.getLogger(__name__)

DEFAULT_DT0 = 4e-3
MIN_ORDER = 1.0
ORDER_METRICS = ("residual", "de_slope", "closure_defect")


@dataclass
class ConvergenceTable:
    """Errors and observed orders over a dt-halving sequence.

    Attributes:
        dts: dt of each level.
        errors: Metric name -> error per level.
        orders: Metric name -> order between consecutive levels.
        pe_defects: PE reproduction defect per level.
        t_min: Shared last marched level.
    """

    dts: list[float]
    errors: dict[str, list[float]]
    orders: dict[str, list[float]] = field(default_factory=dict)
    pe_defects: list[float] = field(default_factory=list)
    t_min: float = 0.0

    def monotone(self, metric: str) -> bool:
        values = self.errors[metric]
        return all(b < a for a, b in zip(values, values[1:]))

    def failures(self) -> list[str]:
        """Metrics whose errors do not decrease or whose orders fall below MIN_ORDER."""
        failed = []
        for metric in ORDER_METRICS:
            if not self.monotone(metric):
                failed.append(f"{metric}: non-monotone error decay")
            elif not all(order >= MIN_ORDER for order in self.orders[metric]):
                failed.append(f"{metric}: order below {MIN_ORDER}")
        if not all(defect <= PE_TOL for defect in self.pe_defects):
            failed.append(f"pe_reproduction: above {PE_TOL:g}")
        return failed

    @property
    def passed(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict[str, Any]:
        return {
            "dts": self.dts,
            "t_min": self.t_min,
            "errors": self.errors,
            "orders": self.orders,
            "monotone": {metric: self.monotone(metric) for metric in ORDER_METRICS},
            "pe_defects": self.pe_defects,
            "passed": self.passed,
            "failures": self.failures(),
        }


def observed_orders(errors: list[float]) -> list[float]:
    """log2 of successive error ratios; nan where a ratio is not positive and finite."""
    orders = []
    for coarse, fine in zip(errors, errors[1:]):
        ratio = coarse / fine if fine > 0.0 else math.inf
        orders.append(math.log2(ratio) if math.isfinite(ratio) and ratio > 0.0 else math.nan)
    return orders


def convergence_study(
    spec: BoundarySpec,
    gas: GasParams,
    n_levels: int = 3,
    dt0: float = DEFAULT_DT0,
    base: SolverParams | None = None,
    residual_t_floor: float = DEFAULT_RESIDUAL_T_FLOOR,
) -> ConvergenceTable:
    """Solve at dt0, dt0/2, ... and tabulate errors and orders.

    Args:
        spec: Admissible boundary data.
        gas: Gas constants.
        n_levels: Number of resolutions (at least 3).
        dt0: Coarsest dt.
        base: Corrector and interpolation settings; dt, t_min and n_characteristics are
            replaced per level.
        residual_t_floor: Lower t limit of the discrete residual window.

    Raises:
        ValueError: If n_levels < 3.
    """
    if n_levels < 3:
        raise ValueError(f"n_levels must be >= 3, got {n_levels}")
    base = base or SolverParams()
    t_min = max(base.t_min, dt0) if base.t_min is not None else dt0

    dts: list[float] = []
    errors: dict[str, list[float]] = {metric: [] for metric in ORDER_METRICS}
    pe_defects: list[float] = []
    for level in range(n_levels):
        dt = dt0 / 2.0**level
        params = replace(base, dt=dt, t_min=t_min, n_characteristics=None)
        run = solve_patch(spec, gas, params, residual_t_floor=residual_t_floor)
        dts.append(dt)
        errors["residual"].append(run.residuals.discrete)
        errors["de_slope"].append(run.de_slope_defect)
        errors["closure_defect"].append(run.solution.closure.closure_defect)
        pe_defects.append(run.invariants.checks["pe_reproduction"].value)
        logger.info(
            f"Level {level}: dt={dt:.3e}, residual={run.residuals.discrete:.3e}, "
            f"DE slope={run.de_slope_defect:.3e}, closure={run.solution.closure.closure_defect:.3e}"
        )

    table = ConvergenceTable(
        dts=dts,
        errors=errors,
        orders={metric: observed_orders(values) for metric, values in errors.items()},
        pe_defects=pe_defects,
        t_min=t_min,
    )
    for failure in table.failures():
        logger.warning(f"Convergence: {failure}")
    return table
