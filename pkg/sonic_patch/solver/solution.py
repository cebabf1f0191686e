"""Result types of the hodograph solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from sonic_patch.solver.mesh import CharMesh


@dataclass(frozen=True)
class BoundViolation:
    """A node whose value left the interval [m0_bar/2, 2 e^k0 M0_bar]."""

    level: int
    char_id: int
    field: str
    value: float
    lower: float
    upper: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "char_id": self.char_id,
            "field": self.field,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
        }


@dataclass(frozen=True)
class SonicTrace:
    """Values on the sonic row t = 0, indexed by characteristic.

    The last entry belongs to P' (r = 0), whose value comes from the wall data at x1.

    Attributes:
        r: Node r-coordinates (decreasing; r[0] = r_star, r[-1] = 0).
        u_extrap: Linear extrapolant of U_bar to t = 0.
        v_extrap: Linear extrapolant of V_bar to t = 0.
        value: Common value (u_extrap + v_extrap) / 2.
        discrepancy: |u_extrap - v_extrap|.
        w_bar: W_bar transported along each positive characteristic to t = 0.
    """

    r: NDArray[np.float64]
    u_extrap: NDArray[np.float64]
    v_extrap: NDArray[np.float64]
    value: NDArray[np.float64]
    discrepancy: NDArray[np.float64]
    w_bar: NDArray[np.float64]


@dataclass(frozen=True)
class ClosureSummary:
    """Scalars of the sonic-line closure.

    Attributes:
        coalescence_constant: C = 1.5 max |W_bar| over the run.
        tolerance: Flag threshold 10 C t_min.
        max_discrepancy: Largest |U - V| extrapolation discrepancy on the sonic row.
        flagged: True if max_discrepancy exceeds tolerance.
        closure_defect: max |(U - V)/t - W_transported| on the last marched level.
        transport_agreement: max |(U - V)/t - W_transported| over all marched nodes.
        degeneracy_ok: True if |U - V| <= C t at every marched node.
    """

    coalescence_constant: float
    tolerance: float
    max_discrepancy: float
    flagged: bool
    closure_defect: float
    transport_agreement: float
    degeneracy_ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "coalescence_constant": self.coalescence_constant,
            "tolerance": self.tolerance,
            "max_discrepancy": self.max_discrepancy,
            "flagged": self.flagged,
            "closure_defect": self.closure_defect,
            "transport_agreement": self.transport_agreement,
            "degeneracy_ok": self.degeneracy_ok,
        }


@dataclass(frozen=True)
class HodographSolution:
    """(U_bar, V_bar) on the characteristic mesh, plus closure data once closed.

    Node arrays share the (L, L) layout of `CharMesh.r`. Before closure the sonic row
    is nan.

    Attributes:
        mesh: The mesh the solution lives on.
        u_bar: U_bar = 1/U per node.
        v_bar: V_bar = -1/V per node.
        w_bar: (U_bar - V_bar)/t for t > 0; transported value on the sonic row.
        w_transport: W_bar transported along positive characteristics from the wall.
        R: t dU_bar/dr per node, by differencing along each level.
        S: t dV_bar/dr per node.
        bound_interval: (m0_bar/2, 2 e^k0 M0_bar).
        bound_violations: First recorded violations of bound_interval.
        n_bound_violations: Total number of violating node values.
        sonic: Sonic-row trace, set by closure.
        closure: Closure scalars, set by closure.
    """

    mesh: CharMesh
    u_bar: NDArray[np.float64]
    v_bar: NDArray[np.float64]
    w_bar: NDArray[np.float64]
    bound_interval: tuple[float, float]
    bound_violations: list[BoundViolation] = field(default_factory=list)
    n_bound_violations: int = 0
    w_transport: NDArray[np.float64] | None = None
    R: NDArray[np.float64] | None = None
    S: NDArray[np.float64] | None = None
    sonic: SonicTrace | None = None
    closure: ClosureSummary | None = None

    @property
    def closed(self) -> bool:
        return self.sonic is not None

    @property
    def positive(self) -> bool:
        """U_bar > 0 and V_bar > 0 at every node that carries a value."""
        mask = self.mesh.mask & np.isfinite(self.u_bar)
        return bool(np.all(self.u_bar[mask] > 0.0) and np.all(self.v_bar[mask] > 0.0))
