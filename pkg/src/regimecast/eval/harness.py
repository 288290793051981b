"""Lag sweeps over full series and regime windows.

Every sweep point is an independent job: build lags, split chronologically,
fit on the head, score the tail. Stochastic models are repeated over several
derived seeds and summarized by the run with the median MAPE, so each
reported row still names the one seed that reproduces it.
"""

from __future__ import annotations

import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..data import PriceSeries, chrono_split, make_lagged
from ..errors import RegimecastError
from ..models.forecast import MODEL_KINDS, NEURAL_KINDS, fit_model
from ..models.mlp import MAX_HIDDEN, MIN_HIDDEN
from ..models.training import TrainConfig
from ..regimes import RegimeConfig, segment
from .metrics import mape, rrmse

HIDDEN_GRID = (5, 10, 25, 50, 100)
FULL = "full"


class SweepPointError(RegimecastError):
    """A lower-layer failure, annotated with the sweep point that raised it."""

    def __init__(self, where: str, cause: Exception):
        self.where = where
        super().__init__(f"{where}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class SweepSpec:
    kp: tuple[int, ...] = tuple(range(1, 11))
    kv: tuple[int, ...] = (0,)
    models: tuple[str, ...] = ("slr",)
    train: TrainConfig = field(default_factory=TrainConfig)
    hidden_units: tuple[int, ...] = HIDDEN_GRID
    lstm_units: int = 64
    repeats: int = 5
    master_seed: int = 0
    ratio: float = 0.8

    def __post_init__(self):
        object.__setattr__(self, "kp", tuple(int(k) for k in self.kp))
        object.__setattr__(self, "kv", tuple(int(k) for k in self.kv))
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "hidden_units", tuple(int(h) for h in self.hidden_units))
        if not self.kp or min(self.kp) < 1:
            raise ValueError("kp range must be non-empty with every lag >= 1")
        if not self.kv or min(self.kv) < 0:
            raise ValueError("kv range must be non-empty with every lag >= 0")
        for m in self.models:
            if m not in MODEL_KINDS:
                raise ValueError(f"unknown model {m!r}; choose from {', '.join(MODEL_KINDS)}")
        if not self.hidden_units or not all(MIN_HIDDEN <= h <= MAX_HIDDEN for h in self.hidden_units):
            raise ValueError(f"hidden units must lie in [{MIN_HIDDEN}, {MAX_HIDDEN}]")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError(f"ratio must lie in (0, 1), got {self.ratio}")

    def points(self, kind: str) -> list[tuple[int, int]]:
        """(kp, kv) pairs valid for ``kind``, in sorted, deterministic order."""
        pairs = []
        for kp in sorted(set(self.kp)):
            for kv in sorted(set(self.kv)):
                if kind == "slr" and kv:
                    continue
                if kind == "mlr" and not kv:
                    continue
                pairs.append((kp, kv))
        return pairs


@dataclass(frozen=True)
class EvaluationReport:
    series: str
    model: str
    kp: int
    kv: int
    offset: int | str
    mape: float
    rrmse: float
    seed: int
    hyper: dict = field(default_factory=dict, compare=False)
    seconds: float = field(default=0.0, compare=False)

    def sort_key(self) -> tuple:
        offset = -1 if self.offset == FULL else int(self.offset)
        return (self.mape, self.kp, self.kv, offset, self.hyper.get("hidden_units", 0), self.model)

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "series": self.series,
            "model": self.model,
            "kp": self.kp,
            "kv": self.kv,
            "offset": self.offset,
            "mape": self.mape,
            "rrmse": self.rrmse,
            "seed": self.seed,
            "hyper": self.hyper,
        }
        if timing:
            d["seconds"] = self.seconds
        return d


def select_best(reports) -> EvaluationReport:
    """Minimum MAPE; ties go to smaller kp, then kv, then earlier offset, then fewer hidden units."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to choose from")
    return min(reports, key=EvaluationReport.sort_key)


def derive_seed(master: int, series_id: str, kind: str, kp: int, kv: int, offset, rep: int, hidden: int = 0) -> int:
    """Stable per-job seed from the master seed and the job's coordinates."""
    off = 0 if offset == FULL else int(offset) + 1
    key = (zlib.crc32(series_id.encode()), MODEL_KINDS.index(kind), kp, kv, off, hidden, rep)
    return int(np.random.SeedSequence(master, spawn_key=key).generate_state(1)[0])


@dataclass(frozen=True)
class _Job:
    series: PriceSeries
    series_id: str
    kind: str
    kp: int
    kv: int
    offset: int | str
    spec: SweepSpec


def _score(series: PriceSeries, kind, kp, kv, ratio, **fit_kw):
    split = chrono_split(make_lagged(series, kp, kv), ratio)
    fc = fit_model(kind, split.train, **fit_kw)
    pred = fc.predict(split.test.X)
    return mape(split.test.Y, pred), rrmse(split.test.Y, pred), fc.hyper


def _median_run(runs):
    """The run whose MAPE is the median; an even count takes the lower middle."""
    order = sorted(runs, key=lambda r: (r[0], r[2]))
    return order[(len(order) - 1) // 2]


def evaluate_point(job: _Job) -> EvaluationReport:
    spec = job.spec
    where = f"{job.series_id} {job.kind} kp={job.kp} kv={job.kv} offset={job.offset}"
    t0 = time.perf_counter()
    try:
        if job.kind not in NEURAL_KINDS:
            seed = derive_seed(spec.master_seed, job.series_id, job.kind, job.kp, job.kv, job.offset, 0)
            m, r, hyper = _score(job.series, job.kind, job.kp, job.kv, spec.ratio)
        else:
            widths = spec.hidden_units if job.kind == "mlp" else (0,)
            candidates = []
            for hidden in widths:
                runs = []
                for rep in range(spec.repeats):
                    seed = derive_seed(spec.master_seed, job.series_id, job.kind, job.kp, job.kv, job.offset, rep, hidden)
                    kw = {"cfg": spec.train, "seed": seed, "units": spec.lstm_units}
                    if hidden:
                        kw["hidden_units"] = hidden
                    m, r, hyper = _score(job.series, job.kind, job.kp, job.kv, spec.ratio, **kw)
                    runs.append((m, r, seed, hyper))
                candidates.append((hidden, _median_run(runs)))
            _, (m, r, seed, hyper) = min(candidates, key=lambda c: (c[1][0], c[0]))
    except RegimecastError as exc:
        raise SweepPointError(where, exc) from exc
    elapsed = time.perf_counter() - t0
    return EvaluationReport(job.series_id, job.kind, job.kp, job.kv, job.offset, m, r, seed, hyper, elapsed)


def run_jobs(jobs: list[_Job], workers: int = 1) -> list[EvaluationReport]:
    """Evaluate jobs with a bounded pool; results come back in job order."""
    if workers <= 1 or len(jobs) <= 1:
        return [evaluate_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate_point, jobs))


@dataclass(frozen=True)
class SweepResult:
    best: EvaluationReport
    table: list[EvaluationReport]


@dataclass(frozen=True)
class RegimeResult:
    best: EvaluationReport
    per_regime: dict[int, SweepResult]
    table: list[EvaluationReport]


def _jobs_for(series: PriceSeries, series_id: str, kind: str, spec: SweepSpec, offset) -> list[_Job]:
    points = spec.points(kind)
    if not points:
        raise ValueError(f"{kind}: the kp/kv ranges give no valid sweep point")
    return [_Job(series, series_id, kind, kp, kv, offset, spec) for kp, kv in points]


def run_full_series(series: PriceSeries, kind: str, spec: SweepSpec | None = None, workers: int = 1) -> SweepResult:
    spec = spec or SweepSpec(models=(kind,))
    table = run_jobs(_jobs_for(series, series.id, kind, spec, FULL), workers)
    return SweepResult(select_best(table), table)


def run_regimes(
    series: PriceSeries,
    kind: str,
    cfg: RegimeConfig | None = None,
    spec: SweepSpec | None = None,
    workers: int = 1,
) -> RegimeResult:
    spec = spec or SweepSpec(models=(kind,))
    windows = segment(series, cfg)
    jobs = [j for w in windows for j in _jobs_for(w.slice, series.id, kind, spec, w.start)]
    table = run_jobs(jobs, workers)
    per_regime = {}
    for w in windows:
        rows = [r for r in table if r.offset == w.start]
        per_regime[w.start] = SweepResult(select_best(rows), rows)
    return RegimeResult(select_best(table), per_regime, table)
