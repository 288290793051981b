"""Fixed-width, partially overlapping time-regime windows.

Window ``n`` covers observations ``[n*h, n*h + A)`` for
``n = 0 .. floor((D - A) / h)``; trailing points that cannot fill a whole
window are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import PriceSeries
from .errors import SizeError
from .stats.descriptive import StatsSummary, describe

DEFAULT_WIDTH = 200
DEFAULT_SHIFT = 120


@dataclass(frozen=True)
class RegimeConfig:
    width: int = DEFAULT_WIDTH
    shift: int = DEFAULT_SHIFT

    def __post_init__(self):
        if self.width < 2:
            raise ValueError(f"regime width must be at least 2, got {self.width}")
        if self.shift < 1:
            raise ValueError(f"regime shift must be at least 1, got {self.shift}")

    def count(self, length: int) -> int:
        if length < self.width:
            return 0
        return (length - self.width) // self.shift + 1


@dataclass(frozen=True)
class RegimeWindow:
    n: int
    start: int
    width: int
    slice: PriceSeries

    @property
    def stop(self) -> int:
        return self.start + self.width


def segment(series: PriceSeries, cfg: RegimeConfig | None = None) -> list[RegimeWindow]:
    cfg = cfg or RegimeConfig()
    D = len(series)
    if D < cfg.width:
        raise SizeError(f"{series.id}: {D} observations cannot fill a {cfg.width}-point regime")
    return [
        RegimeWindow(n, n * cfg.shift, cfg.width, series[n * cfg.shift : n * cfg.shift + cfg.width])
        for n in range(cfg.count(D))
    ]


def regime_stats(windows: list[RegimeWindow], trim: float = 0.1) -> dict[int, StatsSummary]:
    """Descriptive statistics per window, keyed by offset ``n*h``."""
    if not windows:
        raise SizeError("no regime windows given")
    return {w.start: describe(w.slice.close, trim) for w in windows}
