"""Price-series ingestion, lagged supervised datasets, chronological splits and scaling."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import IntegrityError, SchemaError, SizeError

OPTIONAL_COLUMNS = ("open", "high", "low", "volume")
CSV_COLUMNS = ("date", "open", "high", "low", "close", "volume")


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Date-indexed daily observations for one instrument.

    Arrays are read-only; slicing returns a new series sharing no mutable state.
    """

    id: str
    dates: np.ndarray
    close: np.ndarray
    volume: np.ndarray | None = None
    open: np.ndarray | None = None
    high: np.ndarray | None = None
    low: np.ndarray | None = None

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("dates", _frozen(self.dates, "datetime64[D]"))
        set_("close", _frozen(self.close))
        n = len(self.dates)
        if len(self.close) != n:
            raise IntegrityError(f"{self.id}: close has {len(self.close)} values for {n} dates")
        for name in OPTIONAL_COLUMNS:
            col = getattr(self, name)
            if col is not None:
                col = _frozen(col)
                if len(col) != n:
                    raise IntegrityError(f"{self.id}: {name} has {len(col)} values for {n} dates")
                set_(name, col)
        if n > 1 and not np.all(np.diff(self.dates).astype(np.int64) > 0):
            dup = self.dates[1:][np.diff(self.dates).astype(np.int64) == 0]
            if len(dup):
                raise IntegrityError(f"{self.id}: duplicate date {dup[0]}")
            raise IntegrityError(f"{self.id}: dates are not strictly increasing")
        if n and not np.all(self.close > 0):
            bad = int(np.argmax(~(self.close > 0)))
            raise IntegrityError(
                f"{self.id}: non-positive close {self.close[bad]!r} on {self.dates[bad]}"
            )

    def __len__(self) -> int:
        return len(self.dates)

    def __getitem__(self, item: slice) -> "PriceSeries":
        if not isinstance(item, slice):
            raise TypeError("PriceSeries supports slice indexing only")
        kw = {k: (None if getattr(self, k) is None else getattr(self, k)[item]) for k in OPTIONAL_COLUMNS}
        return PriceSeries(self.id, self.dates[item], self.close[item], **kw)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries) or self.id != other.id:
            return False
        if not np.array_equal(self.dates, other.dates) or not np.array_equal(self.close, other.close):
            return False
        for k in OPTIONAL_COLUMNS:
            a, b = getattr(self, k), getattr(other, k)
            if (a is None) != (b is None) or (a is not None and not np.array_equal(a, b)):
                return False
        return True

    __hash__ = None

    @property
    def has_volume(self) -> bool:
        return self.volume is not None


def load_csv(
    path: str | Path,
    schema: Mapping[str, str] | None = None,
    series_id: str | None = None,
) -> PriceSeries:
    """Read a daily price CSV into a :class:`PriceSeries`, sorted by date.

    ``schema`` maps canonical column names (``date``, ``close``, ``volume``, ...)
    to header names in the file; unmapped names are looked up case-insensitively.
    Any row with an unparseable date or number rejects the whole file.
    """
    path = Path(path)
    schema = dict(schema or {})
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        lookup = {h.strip().lower(): i for i, h in enumerate(header)}

        def col(name: str) -> int | None:
            key = schema.get(name, name).strip().lower()
            return lookup.get(key)

        idx = {name: col(name) for name in CSV_COLUMNS}
        for required in ("date", "close"):
            if idx[required] is None:
                raise SchemaError(f"{path}: missing required column '{schema.get(required, required)}'")

        dates, values = [], {k: [] for k in CSV_COLUMNS[1:] if idx[k] is not None}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                dates.append(np.datetime64(row[idx["date"]].strip(), "D"))
                for k in values:
                    values[k].append(float(row[idx[k]]))
            except (ValueError, IndexError) as exc:
                raise IntegrityError(f"{path}:{lineno}: unparseable row {row!r} ({exc})") from None

    dates = np.array(dates, dtype="datetime64[D]")
    order = np.argsort(dates, kind="stable")
    cols = {k: np.asarray(v, dtype=float)[order] for k, v in values.items()}
    close = cols.pop("close")
    return PriceSeries(series_id or path.stem, dates[order], close, **cols)


def write_csv(series: PriceSeries, path: str | Path) -> None:
    """Write ``series`` in the fixture schema; ``load_csv`` reproduces it exactly."""
    present = [c for c in CSV_COLUMNS[1:] if getattr(series, c) is not None]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", *present])
        for i, d in enumerate(series.dates):
            w.writerow([str(d), *(repr(float(getattr(series, c)[i])) for c in present)])


@dataclass(frozen=True, eq=False)
class LaggedDataset:
    """Supervised pairs for one-step-ahead forecasting.

    Row ``i`` of ``X`` holds the ``k_p`` closes preceding ``Y[i]`` (oldest first)
    followed by the ``k_v`` preceding volumes. ``target_index`` records the
    position of each target in the source series.
    """

    X: np.ndarray
    Y: np.ndarray
    k_p: int
    k_v: int
    target_index: np.ndarray
    series_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "X", _frozen(self.X))
        object.__setattr__(self, "Y", _frozen(self.Y))
        object.__setattr__(self, "target_index", _frozen(self.target_index, np.int64))
        if self.X.ndim != 2 or self.X.shape[0] != len(self.Y):
            raise SizeError(f"X rows {self.X.shape} do not match Y length {len(self.Y)}")
        if self.X.shape[1] != self.k_p + self.k_v:
            raise SizeError(f"X has {self.X.shape[1]} columns, expected k_p + k_v = {self.k_p + self.k_v}")

    def __len__(self) -> int:
        return len(self.Y)

    @property
    def close_lags(self) -> np.ndarray:
        return self.X[:, : self.k_p]

    @property
    def volume_lags(self) -> np.ndarray:
        return self.X[:, self.k_p :]

    def rows(self, item: slice) -> "LaggedDataset":
        return LaggedDataset(self.X[item], self.Y[item], self.k_p, self.k_v, self.target_index[item], self.series_id)


def make_lagged(series: PriceSeries, k_p: int, k_v: int = 0) -> LaggedDataset:
    if k_p < 1 or k_v < 0:
        raise ValueError(f"need k_p >= 1 and k_v >= 0, got k_p={k_p}, k_v={k_v}")
    if k_v > 0 and series.volume is None:
        raise SchemaError(f"{series.id}: volume lags requested but the series has no volume column")
    m = max(k_p, k_v)
    n = len(series)
    if n <= m:
        raise SizeError(f"{series.id}: {n} observations cannot supply {m} lags plus a target")
    t = np.arange(m, n)
    parts = [series.close[t[:, None] + np.arange(-k_p, 0)]]
    if k_v:
        parts.append(series.volume[t[:, None] + np.arange(-k_v, 0)])
    X = np.hstack(parts)
    return LaggedDataset(X, series.close[t], k_p, k_v, t, series.id)


@dataclass(frozen=True)
class SplitDataset:
    train: LaggedDataset
    test: LaggedDataset
    ratio: float


def chrono_split(ds: LaggedDataset, ratio: float = 0.8) -> SplitDataset:
    """Split rows in time order: the first ``floor(ratio * N)`` rows train."""
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie strictly between 0 and 1, got {ratio}")
    n = len(ds)
    # the epsilon guards floor(0.29 * 100) == 28 style float artefacts
    n_train = int(math.floor(ratio * n + 1e-9))
    if n_train < 1 or n_train >= n:
        raise SizeError(f"ratio {ratio} on {n} rows gives an empty train or test part")
    return SplitDataset(ds.rows(slice(0, n_train)), ds.rows(slice(n_train, n)), ratio)


@dataclass(frozen=True, eq=False)
class Scaler:
    """Per-feature min-max scaling to [0, 1]; constant features map to 0."""

    minimum: np.ndarray
    maximum: np.ndarray
    _span: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        lo, hi = _frozen(self.minimum), _frozen(self.maximum)
        span = hi - lo
        span = _frozen(np.where(span > 0, span, 1.0))
        object.__setattr__(self, "minimum", lo)
        object.__setattr__(self, "maximum", hi)
        object.__setattr__(self, "_span", span)

    @classmethod
    def fit(cls, train: np.ndarray) -> "Scaler":
        a = np.asarray(train, dtype=float)
        if a.ndim == 1:
            a = a[:, None]
        if a.shape[0] == 0:
            raise SizeError("cannot fit a scaler on zero rows")
        return cls(a.min(axis=0), a.max(axis=0))

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.minimum) / self._span

    def invert(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float) * self._span + self.minimum


def fit_scaler(train: np.ndarray) -> Scaler:
    return Scaler.fit(train)


def load_fixture(name: str, data_dir: str | Path | None = None) -> PriceSeries:
    """Load ``<data_dir>/<name>.csv``; defaults to the repository ``data/`` directory."""
    base = Path(data_dir) if data_dir is not None else default_data_dir()
    return load_csv(base / f"{name}.csv", series_id=name)


def default_data_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "data"


__all__: Sequence[str] = [
    "PriceSeries",
    "LaggedDataset",
    "SplitDataset",
    "Scaler",
    "load_csv",
    "write_csv",
    "make_lagged",
    "chrono_split",
    "fit_scaler",
    "load_fixture",
    "default_data_dir",
]
