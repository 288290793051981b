from __future__ import annotations

import numpy as np

from ..errors import ShapeError, SizeError
from .training import Network, TrainConfig, train

MIN_HIDDEN, MAX_HIDDEN = 5, 100


def glorot(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class MlpModel(Network):
    """One tanh hidden layer feeding a single linear output unit."""

    param_names = ("W1", "b1", "W2", "b2")
    kind = "mlp"

    def __init__(self, W1, b1, W2, b2, dtype=np.float64):
        # W1 (hidden, inputs), b1 (hidden,), W2 (1, hidden), b2 (1,)
        self._bind(dtype, W1=W1, b1=b1, W2=W2, b2=b2)

    @classmethod
    def init(cls, n_inputs: int, hidden_units: int, rng: np.random.Generator) -> "MlpModel":
        return cls(
            glorot(rng, (hidden_units, n_inputs), n_inputs, hidden_units),
            np.zeros(hidden_units),
            glorot(rng, (1, hidden_units), hidden_units, 1),
            np.zeros(1),
        )

    @property
    def hidden_units(self) -> int:
        return self.W1.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.W1.shape[1]

    def _check(self, X):
        X = np.asarray(X, dtype=self.dtype)
        if X.ndim != 2 or X.shape[1] != self.n_inputs:
            raise ShapeError(f"MLP expects (n, {self.n_inputs}) inputs, got {X.shape}")
        return X

    def forward(self, X) -> np.ndarray:
        X = self._check(X)
        return (np.tanh(X @ self.W1.T + self.b1) @ self.W2.T)[:, 0] + self.b2[0]

    def loss_and_grads(self, X, y):
        X = self._check(X)
        y = np.asarray(y, dtype=self.dtype)
        a = np.tanh(X @ self.W1.T + self.b1)
        out = (a @ self.W2.T)[:, 0] + self.b2[0]
        r = out - y
        loss = float(np.mean(r * r))
        dout = (2.0 / len(y)) * r
        grad, g = self._grad_buffer()
        g["W2"][0] = dout @ a
        g["b2"][0] = dout.sum()
        dz = np.outer(dout, self.W2[0]) * (1.0 - a * a)
        g["W1"][...] = dz.T @ X
        g["b1"][...] = dz.sum(axis=0)
        return loss, grad


def mlp_fit(X, y, hidden_units: int, cfg: TrainConfig | None = None) -> MlpModel:
    """Train an MLP on already-scaled inputs and targets."""
    cfg = cfg or TrainConfig()
    if not MIN_HIDDEN <= hidden_units <= MAX_HIDDEN:
        raise ValueError(f"hidden_units must lie in [{MIN_HIDDEN}, {MAX_HIDDEN}], got {hidden_units}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise SizeError(f"need a non-empty (n, k) training matrix, got shape {X.shape}")
    net = MlpModel.init(X.shape[1], hidden_units, np.random.default_rng(cfg.seed)).astype(cfg.dtype)
    net.initial_loss = net.loss(X, y)
    net.loss_history = train(net, X, y, cfg)
    net.final_loss = net.loss(X, y)
    return net
