"""Mini-batch training loop and the adaptive-moment optimizer shared by the networks."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import SizeError, TrainingError


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 600
    batch_size: int = 72
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0
    shuffle: bool = field(default=False)
    dtype: str = "float32"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.shuffle:
            raise ValueError("time-series batches are never shuffled; shuffle must be False")
        if self.dtype not in ("float32", "float64"):
            raise ValueError(f"dtype must be float32 or float64, got {self.dtype!r}")

    def to_dict(self) -> dict:
        return asdict(self)


class Adam:
    """Adam with bias-corrected moment estimates, updating ``param`` in place."""

    def __init__(self, param: np.ndarray, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.param = param
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = np.zeros_like(param)
        self.v = np.zeros_like(param)
        self._tmp = np.empty_like(param)
        self.t = 0

    @classmethod
    def from_config(cls, param, cfg: TrainConfig) -> "Adam":
        return cls(param, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon)

    def step(self, grad: np.ndarray) -> None:
        self.t += 1
        m, v, tmp = self.m, self.v, self._tmp
        # m <- b1*m + (1-b1)*g ; v <- b2*v + (1-b2)*g^2
        np.subtract(grad, m, out=tmp)
        m += (1.0 - self.beta1) * tmp
        np.multiply(grad, grad, out=tmp)
        tmp -= v
        v += (1.0 - self.beta2) * tmp
        c2 = np.sqrt(1.0 - self.beta2**self.t)
        step = self.lr * c2 / (1.0 - self.beta1**self.t)
        np.sqrt(v, out=tmp)
        tmp += self.eps * c2
        np.divide(m, tmp, out=tmp)
        tmp *= step
        self.param -= tmp


def batches(n: int, size: int):
    """Consecutive, order-preserving index slices; the last one may be short."""
    for start in range(0, n, size):
        yield slice(start, min(start + size, n))


class Network:
    """Parameter bookkeeping for the from-scratch networks.

    All parameters are views into one contiguous vector ``self.flat`` so the
    optimizer updates everything with a few vector operations. Subclasses
    define ``param_names``, ``forward(X)`` and ``loss_and_grads(X, y)``, the
    latter returning ``(loss, flat_gradient)``.
    """

    param_names: tuple[str, ...] = ()

    def _bind(self, dtype=np.float64, **arrays) -> None:
        arrays = {k: np.asarray(arrays[k], dtype=dtype) for k in self.param_names}
        self.shapes = {k: a.shape for k, a in arrays.items()}
        self.flat = np.concatenate([a.ravel() for a in arrays.values()])
        for k, v in self._views(self.flat).items():
            setattr(self, k, v)
        self.loss_history: list[float] = []
        self.initial_loss = float("nan")
        self.final_loss = float("nan")

    def _views(self, buf: np.ndarray) -> dict[str, np.ndarray]:
        out, i = {}, 0
        for k in self.param_names:
            size = int(np.prod(self.shapes[k]))
            out[k] = buf[i : i + size].reshape(self.shapes[k])
            i += size
        return out

    def _grad_buffer(self) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        buf = np.zeros_like(self.flat)
        return buf, self._views(buf)

    @property
    def dtype(self):
        return self.flat.dtype

    def astype(self, dtype) -> "Network":
        """Copy of this network with parameters stored as ``dtype``."""
        return type(self)(**{k: getattr(self, k) for k in self.param_names}, dtype=dtype)

    @property
    def params(self) -> list[np.ndarray]:
        return [getattr(self, k) for k in self.param_names]

    @property
    def n_params(self) -> int:
        return self.flat.size

    def get_flat(self) -> np.ndarray:
        return self.flat.copy()

    def set_flat(self, flat: np.ndarray) -> None:
        self.flat[...] = flat

    def loss(self, X, y) -> float:
        r = self.forward(X) - y
        return float(np.mean(r * r))


def train(net: Network, X: np.ndarray, y: np.ndarray, cfg: TrainConfig) -> list[float]:
    """Minimize MSE over chronological mini-batches; returns per-epoch mean batch loss."""
    n = len(y)
    if n == 0:
        raise SizeError("no training rows")
    opt = Adam.from_config(net.flat, cfg)
    history = []
    for epoch in range(cfg.epochs):
        total = 0.0
        for sl in batches(n, cfg.batch_size):
            loss, grad = net.loss_and_grads(X[sl], y[sl])
            if not np.isfinite(loss):
                raise TrainingError(epoch, loss)
            opt.step(grad)
            total += loss * (sl.stop - sl.start)
        history.append(total / n)
    return history
