"""Classical (moving-average) seasonal decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import DomainError, SizeError

Kind = Literal["additive", "multiplicative"]


@dataclass(frozen=True, eq=False)
class Decomposition:
    kind: str
    period: int
    observed: np.ndarray
    trend: np.ndarray
    seasonal: np.ndarray
    residual: np.ndarray

    @property
    def defined(self) -> np.ndarray:
        """Mask of points where the centred moving average exists."""
        return ~np.isnan(self.trend)

    def reconstruct(self) -> np.ndarray:
        if self.kind == "additive":
            return self.trend + self.seasonal + self.residual
        return self.trend * self.seasonal * self.residual

    def to_dict(self) -> dict:
        clean = lambda a: [None if np.isnan(v) else float(v) for v in a]  # noqa: E731
        return {
            "kind": self.kind,
            "period": self.period,
            "trend": clean(self.trend),
            "seasonal": clean(self.seasonal),
            "residual": clean(self.residual),
        }


def centered_moving_average(x: np.ndarray, period: int) -> np.ndarray:
    """Centred MA of width ``period``; for even periods a 2 x period MA.

    The first and last ``period // 2`` entries are NaN.
    """
    if period % 2:
        w = np.full(period, 1.0 / period)
    else:
        w = np.full(period + 1, 1.0 / period)
        w[[0, -1]] = 0.5 / period
    half = len(w) // 2
    out = np.full(len(x), np.nan)
    out[half : len(x) - half] = np.convolve(x, w, mode="valid")
    return out


def decompose(x, period: int, kind: Kind = "multiplicative") -> Decomposition:
    a = np.asarray(x, dtype=float)
    if kind not in ("additive", "multiplicative"):
        raise ValueError(f"unknown decomposition kind {kind!r}")
    if period < 2:
        raise ValueError(f"period must be at least 2, got {period}")
    if a.size < 2 * period:
        raise SizeError(f"decomposition with period {period} needs {2 * period} points, got {a.size}")
    if kind == "multiplicative" and np.any(a <= 0):
        raise DomainError("multiplicative decomposition requires strictly positive values")

    trend = centered_moving_average(a, period)
    detrended = a - trend if kind == "additive" else a / trend

    phase = np.arange(a.size) % period
    means = np.array([np.nanmean(detrended[phase == p]) for p in range(period)])
    if kind == "additive":
        means -= means.mean()
        seasonal = means[phase]
        residual = a - trend - seasonal
    else:
        means /= means.mean()
        seasonal = means[phase]
        residual = a / (trend * seasonal)
    return Decomposition(kind, period, a, trend, seasonal, residual)
