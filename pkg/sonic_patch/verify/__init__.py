"""Independent checks: exact-flow oracles and Hoelder fits.

The solver-driven studies live in `sonic_patch.verify.manufactured` and
`sonic_patch.verify.convergence` and are imported from there.
"""

from sonic_patch.verify.holder import HolderFit, holder_fit
from sonic_patch.verify.oracle import (
    OracleField,
    OracleReport,
    analytic_oracle_residuals,
    exact_flows,
    run_oracle_checks,
    self_test,
)

__all__ = [
    "HolderFit",
    "OracleField",
    "OracleReport",
    "analytic_oracle_residuals",
    "exact_flows",
    "holder_fit",
    "run_oracle_checks",
    "self_test",
]
