"""Augmented Dickey-Fuller unit-root test, constant-only regression.

The auxiliary regression is

    dx_t = a + g * x_{t-1} + sum_{i=1..p} b_i * dx_{t-i} + e_t

and the statistic is the t-ratio of ``g``. ``p`` is chosen by minimum AIC
over ``0..max_lag`` on a common estimation sample, then the chosen model is
refit on every usable observation.

P-values use MacKinnon's (1994) response-surface approximation of the
Dickey-Fuller distribution; critical values use MacKinnon (2010)
finite-sample surfaces. Both sets of coefficients are for the single-series,
constant-only case.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import ndtr

from ..errors import NumericError, SizeError
from ..models.ols import ols_fit

# MacKinnon (1994), N = 1, constant: tau* splits the small-p and large-p fits
TAU_STAR = -1.61
TAU_MIN = -18.83
TAU_MAX = 2.74
SMALL_P = (2.1659, 1.4412, 3.8269e-2)
LARGE_P = (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2)

# MacKinnon (2010), N = 1, constant: crit(T) = c0 + c1/T + c2/T^2 + c3/T^3
CRIT_2010 = {
    "1%": (-3.43035, -6.5393, -16.786, -79.433),
    "5%": (-2.86154, -2.8903, -4.234, -40.040),
    "10%": (-2.56677, -1.5384, -2.809, 0.0),
}

MIN_NOBS = 20


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p_value: float
    used_lag: int
    n_obs: int
    critical_values: dict
    max_lag: int
    aic: float

    def rejects_unit_root(self, level: float = 0.05) -> bool:
        return self.p_value < level

    def to_dict(self) -> dict:
        return asdict(self)


def mackinnon_p(stat: float) -> float:
    if stat > TAU_MAX:
        return 1.0
    if stat < TAU_MIN:
        return 0.0
    coef = SMALL_P if stat <= TAU_STAR else LARGE_P
    z = sum(c * stat**i for i, c in enumerate(coef))
    return float(ndtr(z))


def mackinnon_crit(nobs: float = math.inf) -> dict:
    out = {}
    for level, c in CRIT_2010.items():
        if math.isinf(nobs):
            out[level] = c[0]
        else:
            out[level] = sum(ci / nobs**i for i, ci in enumerate(c))
    return out


def schwert_max_lag(n: int) -> int:
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def _design(x: np.ndarray, dx: np.ndarray, lags: int, start: int):
    """Rows ``t = start .. len(dx)-1``: target dx[t], level x[t], dx[t-1..t-lags]."""
    t = np.arange(start, len(dx))
    cols = [x[t]] + [dx[t - i] for i in range(1, lags + 1)]
    return np.column_stack(cols), dx[t]


def adf_test(x, max_lag: int | None = None, autolag: bool = True) -> AdfResult:
    """ADF test with a constant; set ``autolag=False`` to use exactly ``max_lag`` lags."""
    a = np.asarray(x, dtype=float)
    n = a.size
    if n < MIN_NOBS + 2:
        raise SizeError(f"ADF needs more than {MIN_NOBS + 1} observations, got {n}")
    if max_lag is None:
        max_lag = schwert_max_lag(n)
    max_lag = int(min(max_lag, n // 2 - 2))
    if max_lag < 0:
        raise SizeError(f"series of length {n} is too short for any lag")
    dx = np.diff(a)

    if autolag:
        best_lag, best_aic = 0, math.inf
        for p in range(max_lag + 1):
            X, y = _design(a, dx, p, max_lag)
            if len(y) < MIN_NOBS:
                raise SizeError(f"only {len(y)} observations left after lagging")
            aic = _fit(X, y).aic
            if aic < best_aic:
                best_lag, best_aic = p, aic
    else:
        best_lag, best_aic = max_lag, math.nan

    X, y = _design(a, dx, best_lag, best_lag)
    if len(y) < MIN_NOBS:
        raise SizeError(f"only {len(y)} observations left after lagging")
    fit = _fit(X, y)
    stat = float(fit.b[0] / fit.se[1])
    nobs = len(y)
    return AdfResult(stat, mackinnon_p(stat), best_lag, nobs, mackinnon_crit(nobs), max_lag, float(best_aic))


def _fit(X, y):
    try:
        return ols_fit(X, y)
    except NumericError as exc:
        raise NumericError(f"ADF auxiliary regression failed: {exc}") from exc
