"""Run configuration: one YAML file holding every knob of a forecasting run.

Example::

    series:
      BTC: data/BTC.csv
    models: [slr, lstm]
    modes: [full, regimes]
    seed: 0
    output_dir: out
    regimes: {width: 200, shift: 120}
    sweep: {kp: 1..10, kv: [0], ratio: 0.8, repeats: 5}
    train: {epochs: 600, batch_size: 72}

Relative paths resolve against the directory holding the config file.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import yaml

from .errors import RegimecastError
from .eval.harness import HIDDEN_GRID, SweepSpec
from .models.forecast import MODEL_KINDS
from .models.training import TrainConfig
from .regimes import RegimeConfig

MODES = ("full", "regimes")


class ConfigError(RegimecastError):
    """Invalid run configuration; the message names the offending field."""


def parse_lags(value, name: str) -> tuple[int, ...]:
    """Accept ``[1, 2, 5]``, a single int, or an inclusive range string ``"1..10"``."""
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected lags, got {value!r}")
    if isinstance(value, int):
        return (value,)
    if isinstance(value, str):
        lo, sep, hi = value.partition("..")
        try:
            if not sep:
                raise ValueError
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise ConfigError(f"{name}: range must look like '1..10', got {value!r}") from None
        if hi < lo:
            raise ConfigError(f"{name}: empty range {value!r}")
        return tuple(range(lo, hi + 1))
    if isinstance(value, (list, tuple)) and value and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        return tuple(value)
    raise ConfigError(f"{name}: expected a non-empty list of integers or 'a..b', got {value!r}")


@dataclass(frozen=True)
class RunConfig:
    series: dict[str, str]
    models: tuple[str, ...] = ("slr",)
    modes: tuple[str, ...] = ("full",)
    seed: int = 0
    output_dir: str = "out"
    width: int = 200
    shift: int = 120
    kp: tuple[int, ...] = tuple(range(1, 11))
    kv: tuple[int, ...] = (0,)
    ratio: float = 0.8
    repeats: int = 5
    hidden_units: tuple[int, ...] = HIDDEN_GRID
    lstm_units: int = 64
    train: TrainConfig = field(default_factory=TrainConfig)
    base_dir: str = field(default=".", compare=False)

    def resolve(self, p: str) -> Path:
        path = Path(p)
        return path if path.is_absolute() else Path(self.base_dir) / path

    def series_paths(self) -> dict[str, Path]:
        return {name: self.resolve(p) for name, p in self.series.items()}

    @property
    def out_path(self) -> Path:
        return self.resolve(self.output_dir)

    def regime_config(self) -> RegimeConfig:
        return RegimeConfig(self.width, self.shift)

    def sweep_spec(self, model: str | None = None) -> SweepSpec:
        return SweepSpec(
            kp=self.kp,
            kv=self.kv,
            models=(model,) if model else self.models,
            train=self.train,
            hidden_units=self.hidden_units,
            lstm_units=self.lstm_units,
            repeats=self.repeats,
            master_seed=self.seed,
            ratio=self.ratio,
        )

    def to_dict(self, portable: bool = False) -> dict:
        """Plain-data form; ``portable`` drops the output directory, which does not affect results."""
        d = {
            "series": dict(self.series),
            "models": list(self.models),
            "modes": list(self.modes),
            "seed": self.seed,
            "output_dir": self.output_dir,
            "regimes": {"width": self.width, "shift": self.shift},
            "sweep": {
                "kp": list(self.kp),
                "kv": list(self.kv),
                "ratio": self.ratio,
                "repeats": self.repeats,
                "hidden_units": list(self.hidden_units),
                "lstm_units": self.lstm_units,
            },
            "train": {k: v for k, v in asdict(self.train).items() if k not in ("seed", "shuffle")},
        }
        if portable:
            del d["output_dir"]
        return d

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def digest(self) -> str:
        canon = json.dumps(self.to_dict(portable=True), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    @classmethod
    def from_dict(cls, doc, base_dir: str | Path = ".", check_paths: bool = True) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config: top level must be a mapping")
        known = {"series", "models", "modes", "seed", "output_dir", "regimes", "sweep", "train"}
        extra = sorted(set(doc) - known)
        if extra:
            raise ConfigError(f"config: unknown field(s) {', '.join(extra)}")

        series = doc.get("series")
        if not isinstance(series, dict) or not series:
            raise ConfigError("series: expected a non-empty mapping of name -> CSV path")
        series = {str(k): str(v) for k, v in series.items()}

        models = doc.get("models", ["slr"])
        if isinstance(models, str):
            models = [models]
        if not models:
            raise ConfigError("models: no models selected")
        bad = [m for m in models if m not in MODEL_KINDS]
        if bad:
            raise ConfigError(f"models: unknown model(s) {', '.join(map(str, bad))}; choose from {', '.join(MODEL_KINDS)}")

        modes = doc.get("modes", ["full"])
        if isinstance(modes, str):
            modes = [modes]
        if not modes or any(m not in MODES for m in modes):
            raise ConfigError(f"modes: expected a non-empty subset of {', '.join(MODES)}, got {modes!r}")

        seed = doc.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigError(f"seed: expected a non-negative integer, got {seed!r}")

        reg = _section(doc, "regimes", {"width", "shift"})
        sw = _section(doc, "sweep", {"kp", "kv", "ratio", "repeats", "hidden_units", "lstm_units"})
        tr = _section(doc, "train", {f.name for f in fields(TrainConfig)} - {"seed", "shuffle"})

        kw = {
            "series": series,
            "models": tuple(models),
            "modes": tuple(modes),
            "seed": seed,
            "output_dir": str(doc.get("output_dir", "out")),
            "base_dir": str(base_dir),
        }
        if "width" in reg:
            kw["width"] = _int(reg["width"], "regimes.width")
        if "shift" in reg:
            kw["shift"] = _int(reg["shift"], "regimes.shift")
        for key in ("kp", "kv", "hidden_units"):
            if key in sw:
                kw[key] = parse_lags(sw[key], f"sweep.{key}")
        if "ratio" in sw:
            if not isinstance(sw["ratio"], (int, float)) or isinstance(sw["ratio"], bool):
                raise ConfigError(f"sweep.ratio: expected a number, got {sw['ratio']!r}")
            kw["ratio"] = float(sw["ratio"])
        for key in ("repeats", "lstm_units"):
            if key in sw:
                kw[key] = _int(sw[key], f"sweep.{key}")
        try:
            kw["train"] = TrainConfig(**tr)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"train: {exc}") from None

        cfg = cls(**kw)
        cfg._validate(check_paths)
        return cfg

    def _validate(self, check_paths: bool) -> None:
        try:
            self.regime_config()
        except ValueError as exc:
            raise ConfigError(f"regimes: {exc}") from None
        for m in self.models:
            try:
                spec = self.sweep_spec(m)
            except ValueError as exc:
                raise ConfigError(f"sweep: {exc}") from None
            if not spec.points(m):
                raise ConfigError(f"sweep.kv: model {m} has no valid (kp, kv) pair; mlr needs kv >= 1 and slr kv = 0")
        if check_paths:
            for name, path in self.series_paths().items():
                if not path.is_file():
                    raise ConfigError(f"series.{name}: file not found: {path}")


def _section(doc: dict, name: str, allowed: set) -> dict:
    sec = doc.get(name, {}) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"{name}: expected a mapping")
    extra = sorted(set(sec) - allowed)
    if extra:
        raise ConfigError(f"{name}: unknown field(s) {', '.join(extra)}")
    return sec


def _int(v, name: str) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"{name}: expected an integer, got {v!r}")
    return v


def load_config(path: str | Path, check_paths: bool = True) -> RunConfig:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: not valid YAML: {exc}") from None
    return RunConfig.from_dict(doc, base_dir=path.parent, check_paths=check_paths)
