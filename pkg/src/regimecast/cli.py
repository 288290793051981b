"""Command-line entry point: ``regimecast {analyze,regimes,forecast,report}``.

Exit status is 0 on success, 1 when a computation fails and 2 when the
command line or config file is invalid.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .data import PriceSeries, load_csv
from .errors import RegimecastError, SizeError, UndefinedCorrelationError
from .eval import (
    compare_benchmarks,
    format_benchmarks,
    read_reports_csv,
    reports_to_csv,
    reports_to_json,
    run_full_series,
    run_regimes,
    select_best,
    timings_to_json,
)
from .regimes import RegimeConfig, regime_stats, segment
from .stats import acf, adf_test, decompose, describe, first_difference, monthly_summary

ACF_LAGS = 50
TRADING_YEAR = 252
CALENDAR_YEAR = 365


def seasonal_period(series: PriceSeries) -> int:
    """365 for series that trade on weekends, 252 otherwise."""
    weekday = (series.dates.astype("datetime64[D]").astype(np.int64) + 3) % 7  # Monday = 0
    return CALENDAR_YEAR if np.mean(weekday >= 5) > 0.1 else TRADING_YEAR


class StageError(RegimecastError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        super().__init__(f"{stage} failed: {type(cause).__name__}: {cause}")


def _guarded(stage: str, fn, *args, **kwargs):
    """Run one analysis stage; a size or degeneracy problem becomes a note instead of a failure."""
    try:
        return fn(*args, **kwargs), None
    except SizeError as exc:
        return None, f"series too short: {exc}"
    except UndefinedCorrelationError as exc:
        return None, f"undefined: {exc}"
    except RegimecastError as exc:
        raise StageError(stage, exc) from exc


def analyze(series: PriceSeries, period: int | None = None, max_lag: int = ACF_LAGS) -> dict:
    doc: dict = {"series": series.id, "n": len(series), "notes": {}}
    stats, note = _guarded("stats", describe, series.close)
    doc["stats"] = None if stats is None else stats.to_dict()
    if note:
        doc["notes"]["stats"] = note

    result, note = _guarded("adf", adf_test, series.close)
    doc["adf"] = None if result is None else result.to_dict()
    if note:
        doc["notes"]["adf"] = note

    doc["acf"] = {}
    diff = first_difference(series.close) if len(series) > 1 else np.array([])
    for name, x in (("close", series.close), ("difference", diff)):
        lags = min(max_lag, len(x) - 1)
        res, note = _guarded(f"acf.{name}", acf, x, lags) if lags >= 1 else (None, "series too short for any lag")
        doc["acf"][name] = None if res is None else res.to_dict()
        if note:
            doc["notes"][f"acf.{name}"] = note

    period = period or seasonal_period(series)
    dec, note = _guarded("decomposition", decompose, series.close, period, "multiplicative")
    doc["decomposition"] = None if dec is None else dec.to_dict()
    if note:
        doc["notes"]["decomposition"] = note

    monthly, _ = _guarded("monthly", monthly_summary, series)
    doc["monthly"] = {str(m): s.to_dict() for m, s in monthly.items()}
    return doc


def regimes_csv(series: PriceSeries, cfg: RegimeConfig, trim: float = 0.1) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "offset", "mu", "sigma", "mu_trimmed"])
    for offset, s in regime_stats(segment(series, cfg), trim).items():
        w.writerow([series.id, offset, repr(s.mu), repr(s.sigma), repr(s.mu_trimmed)])
    return buf.getvalue()


def best_line(r, mode: str) -> str:
    where = "" if mode == "full" else f"offset={r.offset} "
    return f"{r.series} {r.model} {mode} {where}kp={r.kp} mape={r.mape:.3f} rrmse={r.rrmse:.3f} kv={r.kv} seed={r.seed}"


def _file_sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_forecast(cfg: RunConfig, workers: int = 1, only: list[str] | None = None, out=None) -> list:
    """Execute every (series, model, mode) in the config; returns the combined table."""
    out = out or sys.stdout
    paths = cfg.series_paths()
    names = list(paths) if not only else only
    for n in names:
        if n not in paths:
            raise ConfigError(f"--series: {n!r} is not defined in the config")
    rows, best = [], []
    for name in names:
        series = load_csv(paths[name], series_id=name)
        for model in cfg.models:
            spec = cfg.sweep_spec(model)
            if "full" in cfg.modes:
                res = run_full_series(series, model, spec, workers)
                rows += res.table
                best.append(best_line(res.best, "full"))
                print(best[-1], file=out, flush=True)
            if "regimes" in cfg.modes:
                res = run_regimes(series, model, cfg.regime_config(), spec, workers)
                rows += res.table
                best.append(best_line(res.best, "regimes"))
                print(best[-1], file=out, flush=True)

    dest = cfg.out_path
    dest.mkdir(parents=True, exist_ok=True)
    (dest / "reports.csv").write_text(reports_to_csv(rows))
    (dest / "reports.json").write_text(reports_to_json(rows, config=cfg.to_dict(portable=True), version=__version__))
    (dest / "timings.json").write_text(timings_to_json(rows))
    (dest / "best.txt").write_text("\n".join(best) + "\n")
    manifest = {
        "version": __version__,
        "config_sha256": cfg.digest(),
        "config": cfg.to_dict(portable=True),
        "master_seed": cfg.seed,
        "inputs": {n: _file_sha256(paths[n]) for n in names},
        "seeds": [{"series": r.series, "model": r.model, "kp": r.kp, "kv": r.kv, "offset": r.offset, "seed": r.seed} for r in rows],
    }
    (dest / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    (dest / "config.yaml").write_text(cfg.dumps())
    return rows


def report(out_dir: Path, out=None) -> None:
    out = out or sys.stdout
    rows = read_reports_csv(out_dir / "reports.csv")
    if not rows:
        raise RegimecastError(f"{out_dir / 'reports.csv'} holds no rows")
    groups: dict = {}
    for r in rows:
        mode = "full" if r.offset == "full" else "regimes"
        groups.setdefault((r.series, r.model, mode), []).append(r)
    for (_, _, mode), grp in groups.items():
        print(best_line(select_best(grp), mode), file=out)
    print(file=out)
    print(format_benchmarks(compare_benchmarks(rows)), end="", file=out)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regimecast", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="descriptive statistics, unit-root test, ACF, decomposition")
    a.add_argument("--series", required=True, help="CSV file with date and close columns")
    a.add_argument("--out", help="write the JSON document here instead of stdout")
    a.add_argument("--period", type=int, help="seasonal period (default: 365 if weekends trade, else 252)")
    a.add_argument("--max-lag", type=int, default=ACF_LAGS)

    r = sub.add_parser("regimes", help="per-window statistics as CSV")
    r.add_argument("--series", required=True)
    r.add_argument("--config", help="take width and shift from this run config")
    r.add_argument("--width", type=int)
    r.add_argument("--shift", type=int)
    r.add_argument("--out")

    f = sub.add_parser("forecast", help="run the lag sweeps described by a config file")
    f.add_argument("--config", required=True)
    f.add_argument("--series", action="append", help="restrict to this configured series (repeatable)")
    f.add_argument("--out", help="override the output directory")
    f.add_argument("--seed", type=int, help="override the master seed")
    f.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on this)")

    rep = sub.add_parser("report", help="summarize a finished forecast run")
    rep.add_argument("--config", help="read the output directory from this config")
    rep.add_argument("--out", help="output directory of a forecast run")
    return p


def _emit(text: str, dest: str | None) -> None:
    if dest:
        Path(dest).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "analyze":
            try:
                series = load_csv(args.series)
            except RegimecastError as exc:
                raise StageError("load", exc) from exc
            _emit(json.dumps(analyze(series, args.period, args.max_lag), indent=1) + "\n", args.out)
        elif args.command == "regimes":
            width, shift = RegimeConfig().width, RegimeConfig().shift
            if args.config:
                cfg = load_config(args.config, check_paths=False)
                width, shift = cfg.width, cfg.shift
            try:
                rc = RegimeConfig(args.width or width, args.shift or shift)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            _emit(regimes_csv(load_csv(args.series), rc), args.out)
        elif args.command == "forecast":
            cfg = load_config(args.config)
            if args.out:
                cfg = replace(cfg, output_dir=str(Path(args.out).resolve()))
            if args.seed is not None:
                if args.seed < 0:
                    raise ConfigError("--seed: expected a non-negative integer")
                cfg = replace(cfg, seed=args.seed)
            if args.jobs < 1:
                raise ConfigError("--jobs: expected a positive integer")
            run_forecast(cfg, args.jobs, args.series)
        elif args.command == "report":
            if args.out:
                out_dir = Path(args.out)
            elif args.config:
                out_dir = load_config(args.config, check_paths=False).out_path
            else:
                raise ConfigError("report: give --out or --config")
            report(out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RegimecastError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
