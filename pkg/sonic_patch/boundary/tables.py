"""Sampled boundary input.

Two whitespace-delimited text tables describe a wall:

- the Mach table, columns (x, varpi_hat)
- the wall table, columns (x, phi', phi'')

varpi_hat is fitted with a not-a-knot cubic spline (C^2). phi' is fitted with a cubic
Hermite spline that matches the tabulated phi'' at every node, so phi is C^2; phi is its
antiderivative anchored at phi(x1) = y1.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from sonic_patch.boundary.spec import BoundarySpec
from sonic_patch.errors import ConfigError

logger = logging.getLogger(__name__)


def _read_table(path: str | Path, n_columns: int) -> NDArray[np.float64]:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Boundary table not found: {path}")
    try:
        table = np.loadtxt(path, ndmin=2, comments="#")
    except ValueError as exc:
        raise ConfigError(f"{path}: not a numeric table ({exc})") from exc
    if table.shape[1] != n_columns:
        raise ConfigError(f"{path}: expected {n_columns} columns, got {table.shape[1]}")
    if table.shape[0] < 4:
        raise ConfigError(f"{path}: need at least 4 rows, got {table.shape[0]}")
    if not np.all(np.diff(table[:, 0]) > 0.0):
        raise ConfigError(f"{path}: x column must be strictly increasing")
    return table


def load_tables(
    varpi_path: str | Path,
    wall_path: str | Path,
    n_samples: int = 401,
    y1: float = 0.0,
) -> BoundarySpec:
    """Build a BoundarySpec from a Mach table and a wall table.

    Raises:
        FileNotFoundError: If either table is missing.
        ConfigError: If a table is malformed or the two tables cover different intervals.
    """
    mach = _read_table(varpi_path, 2)
    wall = _read_table(wall_path, 3)
    x1, x2 = float(mach[0, 0]), float(mach[-1, 0])
    if not (np.isclose(wall[0, 0], x1) and np.isclose(wall[-1, 0], x2)):
        raise ConfigError(
            f"tables cover different intervals: [{x1}, {x2}] vs [{wall[0, 0]}, {wall[-1, 0]}]"
        )

    varpi = CubicSpline(mach[:, 0], mach[:, 1], bc_type="not-a-knot")
    dvarpi = varpi.derivative()
    dphi = CubicHermiteSpline(wall[:, 0], wall[:, 1], wall[:, 2])
    d2phi = dphi.derivative()
    phi_int = dphi.antiderivative()
    offset = y1 - float(phi_int(x1))

    logger.info(
        f"Loaded boundary tables: {mach.shape[0]} Mach rows, {wall.shape[0]} wall rows, "
        f"x in [{x1}, {x2}]"
    )
    return BoundarySpec(
        x1=x1,
        x2=x2,
        phi=lambda x: phi_int(x) + offset,
        dphi=dphi,
        d2phi=d2phi,
        varpi_hat=varpi,
        dvarpi_hat=dvarpi,
        n_samples=n_samples,
        name="table",
        params={"varpi_table": str(varpi_path), "wall_table": str(wall_path)},
    )
