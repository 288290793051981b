from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..data import PriceSeries
from ..errors import SizeError


@dataclass(frozen=True)
class StatsSummary:
    mu: float
    sigma: float
    mu_trimmed: float
    trim_fraction: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def trimmed_mean(x, trim: float) -> float:
    """Mean after dropping ``floor(trim * n)`` points from each tail."""
    if not 0.0 <= trim < 0.5:
        raise ValueError(f"trim fraction must lie in [0, 0.5), got {trim}")
    a = np.sort(np.asarray(x, dtype=float))
    cut = int(math.floor(trim * len(a)))
    return float(np.mean(a[cut : len(a) - cut]))


def describe(x, trim: float = 0.1, ddof: int = 0) -> StatsSummary:
    """Mean, standard deviation and trimmed mean.

    ``ddof=0`` gives the population standard deviation; pass ``ddof=1`` for
    the sample estimate.
    """
    a = np.asarray(x, dtype=float)
    if a.size < 2:
        raise SizeError(f"describe needs at least 2 observations, got {a.size}")
    if trim == 0:
        mu_t = float(np.mean(a))
    else:
        mu_t = trimmed_mean(a, trim)
    return StatsSummary(float(np.mean(a)), float(np.std(a, ddof=ddof)), mu_t, float(trim), int(a.size))


def first_difference(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.size < 2:
        raise SizeError("first difference needs at least 2 observations")
    return np.diff(a)


@dataclass(frozen=True)
class FiveNumberSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    n: int

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1

    @property
    def whiskers(self) -> tuple[float, float]:
        """Outlier fences at 1.5 IQR beyond the quartiles."""
        return self.q1 - 1.5 * self.iqr, self.q3 + 1.5 * self.iqr

    def to_dict(self) -> dict:
        d = asdict(self)
        d["iqr"] = self.iqr
        d["whisker_low"], d["whisker_high"] = self.whiskers
        return d


def five_number(x) -> FiveNumberSummary:
    a = np.asarray(x, dtype=float)
    if a.size == 0:
        raise SizeError("five-number summary of an empty sample")
    q = np.percentile(a, [0, 25, 50, 75, 100], method="linear")
    return FiveNumberSummary(*map(float, q), n=int(a.size))


def monthly_summary(series: PriceSeries) -> dict[int, FiveNumberSummary]:
    """Five-number summary of closes per calendar month, pooled across years.

    Keys are month numbers 1..12; months without observations are omitted.
    """
    if len(series) == 0:
        raise SizeError(f"{series.id}: empty series")
    months = series.dates.astype("datetime64[M]").astype(np.int64) % 12 + 1
    return {int(m): five_number(series.close[months == m]) for m in np.unique(months)}
