"""Single-layer LSTM regressor trained by backpropagation through time.

Gate pre-activations are packed column-wise as ``[input, forget, output, candidate]``
so one matrix product per step serves all four gates and the three sigmoid gates
form one contiguous block.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, SizeError
from .mlp import glorot
from .training import Network, TrainConfig, train

GATES = ("input", "forget", "output", "candidate")
DEFAULT_UNITS = 64


def sigmoid(z):
    # exp overflow for very negative z gives 1/inf = 0, which is the right limit
    return 1.0 / (1.0 + np.exp(-z))


class LstmModel(Network):
    param_names = ("Wx", "Wh", "b", "Wd", "bd")
    kind = "lstm"

    def __init__(self, Wx, Wh, b, Wd, bd, dtype=np.float64):
        # Wx (features, 4u), Wh (u, 4u), b (4u,), Wd (u,), bd (1,)
        self._bind(dtype, Wx=Wx, Wh=Wh, b=b, Wd=Wd, bd=bd)

    @classmethod
    def init(cls, n_features: int, units: int, rng: np.random.Generator) -> "LstmModel":
        fan_in = n_features + units
        W = np.concatenate([glorot(rng, (fan_in, units), fan_in, units) for _ in GATES], axis=1)
        b = np.zeros(4 * units)
        b[units : 2 * units] = 1.0
        return cls(W[:n_features], W[n_features:], b, glorot(rng, (units,), units, 1), np.zeros(1))

    @property
    def units(self) -> int:
        return self.Wh.shape[0]

    @property
    def n_features(self) -> int:
        return self.Wx.shape[0]

    def gate(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        """``(W, b)`` for one gate, ``W`` laid out as units x (features + units)."""
        k = GATES.index(name)
        cols = slice(k * self.units, (k + 1) * self.units)
        return np.vstack([self.Wx[:, cols], self.Wh[:, cols]]).T, self.b[cols]

    def _check(self, X):
        X = np.asarray(X, dtype=self.dtype)
        if X.ndim != 3 or X.shape[2] != self.n_features or X.shape[1] < 1:
            raise ShapeError(f"LSTM expects (batch, steps, {self.n_features}) inputs, got {X.shape}")
        return X

    def _input_proj(self, X):
        B, T, F = X.shape
        if F <= 2:
            # rank-1 products are faster as broadcasts than through BLAS
            out = X[:, :, 0, None] * self.Wx[0] + self.b
            if F == 2:
                out += X[:, :, 1, None] * self.Wx[1]
            return out
        return (X.reshape(B * T, F) @ self.Wx).reshape(B, T, -1) + self.b

    def _run(self, X, keep: bool):
        B, T, _ = X.shape
        u = self.units
        xz = self._input_proj(X)
        h = np.zeros((B, u), dtype=self.dtype)
        c = np.zeros((B, u), dtype=self.dtype)
        cache = []
        with np.errstate(over="ignore"):
            for t in range(T):
                z = xz[:, t] + h @ self.Wh
                ifo = sigmoid(z[:, : 3 * u])
                i, f, o = ifo[:, :u], ifo[:, u : 2 * u], ifo[:, 2 * u :]
                g = np.tanh(z[:, 3 * u :])
                c_prev, h_prev = c, h
                c = f * c_prev + i * g
                tc = np.tanh(c)
                h = o * tc
                if keep:
                    cache.append((h_prev, c_prev, i, f, g, o, tc))
        return h, c, cache

    def forward(self, X) -> np.ndarray:
        h, _, _ = self._run(self._check(X), keep=False)
        return h @ self.Wd + self.bd[0]

    def loss_and_grads(self, X, y):
        X = self._check(X)
        y = np.asarray(y, dtype=self.dtype)
        B, T, F = X.shape
        h, _, cache = self._run(X, keep=True)
        out = h @ self.Wd + self.bd[0]
        r = out - y
        loss = float(np.mean(r * r))
        dout = (2.0 / len(y)) * r
        grad, views = self._grad_buffer()
        views["Wd"][...] = h.T @ dout
        views["bd"][0] = dout.sum()

        u = self.units
        dh = np.outer(dout, self.Wd)
        dc = np.zeros_like(dh)
        dZ = np.empty((T, B, 4 * u), dtype=self.dtype)
        Hp = np.empty((T, B, u), dtype=self.dtype)
        WhT = self.Wh.T
        for t in range(T - 1, -1, -1):
            h_prev, c_prev, i, f, g, o, tc = cache[t]
            dz = dZ[t]
            dc += dh * o * (1.0 - tc * tc)
            dz[:, :u] = dc * g * i * (1.0 - i)
            dz[:, u : 2 * u] = dc * c_prev * f * (1.0 - f)
            dz[:, 2 * u : 3 * u] = dh * tc * o * (1.0 - o)
            dz[:, 3 * u :] = dc * i * (1.0 - g * g)
            Hp[t] = h_prev
            dh = dz @ WhT
            dc *= f
        dZ2 = dZ.reshape(T * B, 4 * u)
        views["Wx"][...] = X.transpose(1, 0, 2).reshape(T * B, F).T @ dZ2
        views["Wh"][...] = Hp.reshape(T * B, u).T @ dZ2
        views["b"][...] = dZ2.sum(axis=0)
        return loss, grad

    def rollout(self, X) -> tuple[np.ndarray, np.ndarray, float, float]:
        """Run one long sequence; returns final ``(h, c)`` and the gate-activation range seen."""
        X = self._check(X)
        u = self.units
        h = np.zeros((X.shape[0], u), dtype=self.dtype)
        c = np.zeros_like(h)
        lo, hi = 1.0, 0.0
        xz = self._input_proj(X)
        with np.errstate(over="ignore"):
            for t in range(X.shape[1]):
                z = xz[:, t] + h @ self.Wh
                gates = sigmoid(z[:, : 3 * u])
                lo, hi = min(lo, gates.min()), max(hi, gates.max())
                i, f, o = gates[:, :u], gates[:, u : 2 * u], gates[:, 2 * u :]
                c = f * c + i * np.tanh(z[:, 3 * u :])
                h = o * np.tanh(c)
        return h, c, float(lo), float(hi)


def lstm_fit(X, y, cfg: TrainConfig | None = None, units: int = DEFAULT_UNITS) -> LstmModel:
    """Train on already-scaled sequences ``X`` of shape (samples, steps, features)."""
    cfg = cfg or TrainConfig()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 3 or len(X) == 0 or X.shape[1] < 1:
        raise SizeError(f"need a non-empty (samples, steps, features) array, got shape {X.shape}")
    if len(y) != len(X):
        raise ShapeError(f"{len(X)} sequences but {len(y)} targets")
    net = LstmModel.init(X.shape[2], units, np.random.default_rng(cfg.seed)).astype(cfg.dtype)
    net.initial_loss = net.loss(X, y)
    net.loss_history = train(net, X, y, cfg)
    net.final_loss = net.loss(X, y)
    return net
