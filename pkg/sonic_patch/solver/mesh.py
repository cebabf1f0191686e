from __future__ import annotations

"""Characteristic-aligned mesh on the hodograph region P'E'D'.

Levels are t_k = t0 - k dt (k = 0..K, t_K >= t_min) followed by the sonic row t = 0.
One positive characteristic is seeded on the wall image at every level, so characteristic
j has its foot at level j and label xi_j = r_tilde(t_j) - s(t_j); its nodes sit at
r = xi_j + s(t_k) for k >= j. Characteristic 0 starts at E' and is the curve r_check(t).
The sonic point P' (t = 0, r = 0) is the foot of one more characteristic, seeded on the
sonic row itself.

Node arrays are (L, L) with L = K + 2, row = level, column = characteristic; entries with
column > row are nan.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from sonic_patch.boundary.region import RegionGeometry
from sonic_patch.boundary.trace import BoundaryTrace
from sonic_patch.config import SolverParams
from sonic_patch.errors import GeometryError, MeshError
from sonic_patch.gas import char_shift_table

logger = logging.getLogger(__name__)

MIN_LEVELS = 3
# Slack on region membership of mesh nodes
MEMBERSHIP_TOL = 1e-12


@dataclass
class CharMesh:
    """Node layout of the characteristic mesh.

    Attributes:
        t: Level values, length L; t[-1] == 0 is the sonic row.
        s: s(t) at every level.
        xi: Characteristic labels r_b - s(t_b), length L.
        feet_x: Wall abscissa of each characteristic's foot.
        r: Node r-coordinates, shape (L, L).
        dt: Level spacing of the marched levels.
        t_min: Requested last marched level.
        interp_order: Foot interpolation order used by the marcher.
        corrector_iters: Trapezoidal corrector sweeps used by the marcher.
        geometry: Region corners the mesh was built in.
    """

    t: NDArray[np.float64]
    s: NDArray[np.float64]
    xi: NDArray[np.float64]
    feet_x: NDArray[np.float64]
    r: NDArray[np.float64]
    dt: float
    t_min: float
    interp_order: int
    corrector_iters: int
    geometry: RegionGeometry

    @property
    def n_levels(self) -> int:
        """Total rows, including the sonic row."""
        return int(self.t.size)

    @property
    def last_marched(self) -> int:
        """Row index of t_K, the last level reached by marching."""
        return self.n_levels - 2

    @property
    def mask(self) -> NDArray[np.bool_]:
        return np.tril(np.ones((self.n_levels, self.n_levels), dtype=bool))

    @property
    def n_nodes(self) -> int:
        return self.n_levels * (self.n_levels + 1) // 2

    def level_nodes(self, k: int) -> NDArray[np.float64]:
        """r of the nodes on row k, ordered by characteristic (decreasing r)."""
        return self.r[k, : k + 1]

    def characteristic(self, j: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """(t, r) along characteristic j from its foot down to the sonic row."""
        return self.t[j:], self.r[j:, j]


def build_mesh(trace: BoundaryTrace, geometry: RegionGeometry, params: SolverParams) -> CharMesh:
    """Seed one characteristic per level on the wall image and lay out its nodes.

    Raises:
        MeshError: If t_min >= t0 or fewer than MIN_LEVELS levels fit in [t_min, t0].
        GeometryError: If the seeded labels are not strictly decreasing (the wall image is
            not space-like) or a node falls outside the region.
    """
    t0 = geometry.t0
    dt, t_min = params.resolve(t0)
    if not t_min < t0:
        raise MeshError(f"t_min={t_min:.6g} must lie below t0={t0:.6g}")
    n_marched = int(math.floor((t0 - t_min) / dt + 1e-9)) + 1
    if n_marched < MIN_LEVELS:
        raise MeshError(
            f"dt={dt:.6g} leaves {n_marched} level(s) in [t_min, t0] = [{t_min:.6g}, {t0:.6g}]; "
            f"at least {MIN_LEVELS} are needed to resolve the wall"
        )

    t = np.append(t0 - dt * np.arange(n_marched), 0.0)
    s = char_shift_table(t, geometry.gas)

    feet_x = np.array([trace.foot_at_t(float(tk)) for tk in t])
    feet_x[0] = trace.spec.x2
    feet_x[-1] = trace.spec.x1
    r_feet = trace.data_at(feet_x)["r"]
    r_feet[0] = geometry.r0
    r_feet[-1] = 0.0
    xi = r_feet - s
    # Characteristic 0 must reproduce r_check exactly
    xi[0] = geometry.r0 - s[0]

    if np.any(np.diff(xi) >= 0.0):
        bad = int(np.flatnonzero(np.diff(xi) >= 0.0)[0]) + 1
        raise GeometryError(f"wall image is not space-like near level {bad} (t={t[bad]:.6g})")

    n = t.size
    r = np.full((n, n), np.nan)
    rows, cols = np.tril_indices(n)
    r[rows, cols] = xi[cols] + s[rows]

    upper = xi[0] + s
    lower = r_feet
    below = r[rows, cols] < lower[rows] - MEMBERSHIP_TOL
    above = r[rows, cols] > upper[rows] + MEMBERSHIP_TOL
    if np.any(below | above):
        idx = int(np.flatnonzero(below | above)[0])
        raise GeometryError(
            f"node (level {rows[idx]}, characteristic {cols[idx]}) lies outside the region"
        )

    mesh = CharMesh(
        t=t,
        s=s,
        xi=xi,
        feet_x=feet_x,
        r=r,
        dt=dt,
        t_min=t_min,
        interp_order=params.interp_order,
        corrector_iters=params.corrector_iters,
        geometry=geometry,
    )
    logger.info(
        f"Mesh: {n - 1} marched levels + sonic row, {mesh.n_nodes} nodes, dt={dt:.3g}, t_min={t_min:.3g}"
    )
    return mesh
