from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SizeError, UndefinedCorrelationError

# two-sided normal quantiles at the usual rounding
Z95 = 1.96
Z99 = 2.576


@dataclass(frozen=True, eq=False)
class AcfResult:
    """Sample autocorrelations ``r[k]`` for ``k = 0..max_lag`` (``r[0] == 1``).

    Bounds are the white-noise bands ``z / sqrt(n)`` drawn by a correlogram.
    """

    r: np.ndarray
    n: int

    @property
    def bound95(self) -> float:
        return Z95 / np.sqrt(self.n)

    @property
    def bound99(self) -> float:
        return Z99 / np.sqrt(self.n)

    @property
    def max_lag(self) -> int:
        return len(self.r) - 1

    def to_dict(self) -> dict:
        return {
            "lags": list(range(1, len(self.r))),
            "r": [float(v) for v in self.r[1:]],
            "n": self.n,
            "bound95": float(self.bound95),
            "bound99": float(self.bound99),
        }


def acf(x, max_lag: int) -> AcfResult:
    a = np.asarray(x, dtype=float)
    n = a.size
    if max_lag < 1 or max_lag >= n:
        raise SizeError(f"max_lag must lie in [1, {n - 1}], got {max_lag}")
    d = a - a.mean()
    denom = d @ d
    if denom <= 0.0 or not np.isfinite(denom):
        raise UndefinedCorrelationError("autocorrelation is undefined for a constant series")
    r = np.empty(max_lag + 1)
    r[0] = 1.0
    for k in range(1, max_lag + 1):
        r[k] = (d[:-k] @ d[k:]) / denom
    return AcfResult(r, n)
