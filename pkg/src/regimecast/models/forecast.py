"""One fit/predict contract over the linear and neural forecasters.

Linear models see raw prices and volumes. Neural models see min-max scaled
inputs: one scaler shared by every close column and the target, a second one
for volume columns, both fit on training rows only. ``predict`` always takes
raw lag rows and returns prices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..data import LaggedDataset, Scaler
from ..errors import ShapeError
from .lstm import DEFAULT_UNITS, LstmModel, lstm_fit
from .mlp import MlpModel, mlp_fit
from .ols import LinearModel, ols_fit
from .training import TrainConfig

MODEL_KINDS = ("slr", "mlr", "mlp", "lstm")
NEURAL_KINDS = ("mlp", "lstm")
CHECKPOINT_FORMAT = "regimecast-checkpoint"
CHECKPOINT_VERSION = 1


def encode_sequences(closes: np.ndarray, volumes: np.ndarray | None = None) -> np.ndarray:
    """Stack lag columns into ``(rows, steps, features)``, oldest step first.

    With unequal lag counts the shorter feature is zero-padded at the oldest steps.
    """
    closes = np.asarray(closes, dtype=float)
    k_v = 0 if volumes is None else volumes.shape[1]
    steps = max(closes.shape[1], k_v)
    n_feat = 2 if k_v else 1
    out = np.zeros((closes.shape[0], steps, n_feat))
    out[:, steps - closes.shape[1] :, 0] = closes
    if k_v:
        out[:, steps - k_v :, 1] = volumes
    return out


@dataclass
class Forecaster:
    kind: str
    k_p: int
    k_v: int
    model: LinearModel | MlpModel | LstmModel
    close_scaler: Scaler | None = None
    volume_scaler: Scaler | None = None
    hyper: dict = field(default_factory=dict)

    @property
    def n_features(self) -> int:
        return self.k_p + self.k_v

    def _network_input(self, X: np.ndarray) -> np.ndarray:
        closes = self.close_scaler.apply(X[:, : self.k_p])
        volumes = self.volume_scaler.apply(X[:, self.k_p :]) if self.k_v else None
        if self.kind == "mlp":
            return closes if volumes is None else np.hstack([closes, volumes])
        return encode_sequences(closes, volumes)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeError(f"expected (n, {self.n_features}) lag rows, got {X.shape}")
        if self.kind in NEURAL_KINDS:
            z = self.model.forward(self._network_input(X))
            return self.close_scaler.invert(z)
        return self.model.predict(X)


def _scalers(train: LaggedDataset) -> tuple[Scaler, Scaler | None]:
    closes = np.concatenate([train.close_lags.ravel(), train.Y])
    close_scaler = Scaler.fit(closes)
    volume_scaler = Scaler.fit(train.volume_lags.ravel()) if train.k_v else None
    return close_scaler, volume_scaler


def fit_model(
    kind: str,
    train: LaggedDataset,
    cfg: TrainConfig | None = None,
    seed: int | None = None,
    hidden_units: int = 25,
    units: int = DEFAULT_UNITS,
) -> Forecaster:
    """Fit one forecaster on training rows; ``seed`` overrides ``cfg.seed``."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; choose from {', '.join(MODEL_KINDS)}")
    if kind == "slr" and train.k_v:
        raise ValueError("slr uses close lags only; set k_v = 0 or pick mlr")
    if kind == "mlr" and not train.k_v:
        raise ValueError("mlr needs at least one volume lag (k_v >= 1)")

    if kind in ("slr", "mlr"):
        if len(train) and np.all(train.close_lags == train.Y[0]) and np.all(train.Y == train.Y[0]):
            # flat prices are collinear with the intercept; the level alone predicts them exactly
            level = LinearModel(float(train.Y[0]), np.zeros(train.X.shape[1]), None, 0.0, len(train))
            return Forecaster(kind, train.k_p, train.k_v, level)
        return Forecaster(kind, train.k_p, train.k_v, ols_fit(train.X, train.Y))

    cfg = cfg or TrainConfig()
    if seed is not None:
        cfg = replace(cfg, seed=int(seed))
    close_scaler, volume_scaler = _scalers(train)
    fc = Forecaster(kind, train.k_p, train.k_v, None, close_scaler, volume_scaler)
    X = fc._network_input(train.X)
    y = close_scaler.apply(train.Y)
    if kind == "mlp":
        fc.model = mlp_fit(X, y, hidden_units, cfg)
        fc.hyper = {"hidden_units": hidden_units, **cfg.to_dict()}
    else:
        fc.model = lstm_fit(X, y, cfg, units=units)
        fc.hyper = {"units": units, **cfg.to_dict()}
    return fc


# checkpoints


def _pack(a) -> dict:
    a = np.asarray(a, dtype=float)
    return {"shape": list(a.shape), "data": a.ravel().tolist()}


def _unpack(d: dict) -> np.ndarray:
    return np.asarray(d["data"], dtype=float).reshape(d["shape"])


def to_checkpoint(fc: Forecaster) -> dict:
    m = fc.model
    dtype = None
    if fc.kind in NEURAL_KINDS:
        params = {k: _pack(getattr(m, k)) for k in m.param_names}
        dtype = m.dtype.name
    else:
        params = {"b0": _pack(m.b0), "b": _pack(m.b)}
    scalers = {}
    for name, s in (("close", fc.close_scaler), ("volume", fc.volume_scaler)):
        if s is not None:
            scalers[name] = {"minimum": _pack(s.minimum), "maximum": _pack(s.maximum)}
    return {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "kind": fc.kind,
        "k_p": fc.k_p,
        "k_v": fc.k_v,
        "hyper": fc.hyper,
        "dtype": dtype,
        "scalers": scalers,
        "params": params,
    }


def from_checkpoint(doc: dict) -> Forecaster:
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ValueError("not a forecaster checkpoint")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {doc.get('version')}")
    kind = doc["kind"]
    p = {k: _unpack(v) for k, v in doc["params"].items()}
    dtype = doc.get("dtype") or "float64"
    if kind == "mlp":
        model = MlpModel(**p, dtype=dtype)
    elif kind == "lstm":
        model = LstmModel(**p, dtype=dtype)
    else:
        model = LinearModel(float(p["b0"]), p["b"])
    scalers = {k: Scaler(_unpack(v["minimum"]), _unpack(v["maximum"])) for k, v in doc["scalers"].items()}
    return Forecaster(kind, doc["k_p"], doc["k_v"], model, scalers.get("close"), scalers.get("volume"), doc["hyper"])


def save_checkpoint(fc: Forecaster, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_checkpoint(fc), indent=1) + "\n")


def load_checkpoint(path: str | Path) -> Forecaster:
    return from_checkpoint(json.loads(Path(path).read_text()))
