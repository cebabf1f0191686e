"""Hoelder exponent estimation from sampled data.

For dyadic lags L = 1, 2, 4, ... the largest increment max |f(p_{i+L}) - f(p_i)| is
regressed against the median spacing |p_{i+L} - p_i| on log-log axes. The slope is the
fitted exponent. It is a lower-bound style estimate: a Lipschitz input fits about 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import linregress

logger = logging.getLogger(__name__)

MIN_HOLDER_SAMPLES = 16
# Lags need at least this many pairs to enter the fit
MIN_PAIRS_PER_LAG = 4


@dataclass(frozen=True)
class HolderFit:
    """Result of a log-log Hoelder regression.

    Attributes:
        exponent: Fitted slope (nan when undefined).
        stderr: Standard error of the slope (nan with fewer than three lags).
        intercept: log of the fitted constant.
        n_lags: Lags that entered the regression.
        n_samples: Samples supplied.
        predicted: Exponent the caller expects, for reports.
        reason: Why the exponent is undefined, or "".
    """

    exponent: float
    stderr: float
    intercept: float
    n_lags: int
    n_samples: int
    predicted: float | None = None
    reason: str = ""

    @property
    def defined(self) -> bool:
        return math.isfinite(self.exponent)

    def to_dict(self) -> dict[str, Any]:
        def clean(value: float) -> float | None:
            return value if math.isfinite(value) else None

        return {
            "exponent": clean(self.exponent),
            "stderr": clean(self.stderr),
            "n_lags": self.n_lags,
            "n_samples": self.n_samples,
            "predicted": self.predicted,
            "reason": self.reason,
        }


def holder_fit(
    positions: ArrayLike,
    values: ArrayLike,
    predicted_exponent: float | None = None,
) -> HolderFit:
    """Fit a Hoelder exponent to (position, value) samples.

    Args:
        positions: Sample positions along a line or arc length along a curve.
        values: Field values at the positions.
        predicted_exponent: Carried into the result for reporting only.

    Raises:
        ValueError: If fewer than MIN_HOLDER_SAMPLES finite samples are given.
    """
    p = np.asarray(positions, dtype=float).reshape(-1)
    f = np.asarray(values, dtype=float).reshape(-1)
    if p.shape != f.shape:
        raise ValueError(f"positions and values differ in length: {p.size} vs {f.size}")
    keep = np.isfinite(p) & np.isfinite(f)
    p, f = p[keep], f[keep]
    if p.size < MIN_HOLDER_SAMPLES:
        raise ValueError(f"need at least {MIN_HOLDER_SAMPLES} samples, got {p.size}")
    order = np.argsort(p)
    p, f = p[order], f[order]

    log_dp, log_df = [], []
    lag = 1
    while p.size - lag >= MIN_PAIRS_PER_LAG:
        dp = np.abs(p[lag:] - p[:-lag])
        df = np.abs(f[lag:] - f[:-lag])
        spacing = float(np.median(dp))
        increment = float(np.max(df))
        if spacing > 0.0 and increment > 0.0:
            log_dp.append(math.log(spacing))
            log_df.append(math.log(increment))
        lag *= 2

    if len(log_dp) < 2:
        reason = "all increments vanish" if not log_dp else "fewer than two usable lags"
        logger.warning(f"Hoelder fit undefined: {reason}")
        return HolderFit(math.nan, math.nan, math.nan, len(log_dp), int(p.size), predicted_exponent, reason)

    fit = linregress(log_dp, log_df)
    stderr = float(fit.stderr) if len(log_dp) > 2 else math.nan
    return HolderFit(
        exponent=float(fit.slope),
        stderr=stderr,
        intercept=float(fit.intercept),
        n_lags=len(log_dp),
        n_samples=int(p.size),
        predicted=predicted_exponent,
    )
