"""Scale-free forecast error measures, returned as fractions."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, ShapeError


def _relative_errors(y, f) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    f = np.asarray(f, dtype=float)
    if y.shape != f.shape or y.ndim != 1:
        raise ShapeError(f"actual {y.shape} and forecast {f.shape} must be equal-length vectors")
    if y.size == 0:
        raise ShapeError("need at least one observation")
    if np.any(y == 0):
        raise DomainError("relative error undefined: an actual value is zero")
    return (y - f) / y


def mape(y, f) -> float:
    """Mean absolute percentage error, as a fraction."""
    return float(np.mean(np.abs(_relative_errors(y, f))))


def rrmse(y, f) -> float:
    """Root mean squared relative error, as a fraction."""
    e = _relative_errors(y, f)
    return float(np.sqrt(np.mean(e * e)))
