"""Ordinary least squares via Householder QR.

The same core backs the SLR/MLR forecasters and the auxiliary regression of
the augmented Dickey-Fuller test, so it also reports coefficient standard
errors and the Gaussian log-likelihood.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from ..errors import ShapeError, SingularMatrixError, SizeError


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Fitted ``y = b0 + X @ b``.

    ``se`` holds standard errors in the order ``[b0, *b]``.
    """

    b0: float
    b: np.ndarray
    se: np.ndarray | None = None
    ssr: float = float("nan")
    nobs: int = 0

    kind = "linear"

    @property
    def n_features(self) -> int:
        return len(self.b)

    @property
    def params(self) -> np.ndarray:
        return np.concatenate([[self.b0], self.b])

    @property
    def df_resid(self) -> int:
        return self.nobs - len(self.b) - 1

    @property
    def llf(self) -> float:
        n = self.nobs
        return -0.5 * n * (np.log(2 * np.pi) + np.log(self.ssr / n) + 1.0)

    @property
    def aic(self) -> float:
        return -2.0 * self.llf + 2.0 * (len(self.b) + 1)

    def tvalues(self) -> np.ndarray:
        return self.params / self.se

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeError(f"expected (n, {self.n_features}) inputs, got {X.shape}")
        return self.b0 + X @ self.b


def lstsq_qr(A: np.ndarray, y: np.ndarray, rtol: float = 1e-10):
    """Solve ``min ||A beta - y||`` for full-column-rank ``A``.

    Returns ``(beta, R)``. Raises :class:`SingularMatrixError` with the index of
    the first column that is (numerically) a combination of earlier ones.
    """
    n, p = A.shape
    if n < p:
        raise SizeError(f"{n} rows cannot identify {p} coefficients")
    # column norms make the rank test independent of feature units
    norms = np.linalg.norm(A, axis=0)
    for j in np.flatnonzero(norms == 0):
        raise SingularMatrixError(int(j))
    As = A / norms
    Q, R = np.linalg.qr(As, mode="reduced")
    diag = np.abs(np.diag(R))
    bad = np.flatnonzero(diag <= rtol * max(diag.max(), 1.0))
    if bad.size:
        raise SingularMatrixError(int(bad[0]))
    beta = solve_triangular(R, Q.T @ y) / norms
    return beta, R, norms


def ols_fit(X, Y) -> LinearModel:
    """Least-squares fit with an intercept column prepended to ``X``."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if len(Y) != n:
        raise ShapeError(f"X has {n} rows but Y has {len(Y)}")
    p = k + 1
    if n < p + 1:
        raise SizeError(f"need at least {p + 1} rows to fit {p} coefficients, got {n}")
    A = np.hstack([np.ones((n, 1)), X])
    try:
        beta, R, norms = lstsq_qr(A, Y)
    except SingularMatrixError as exc:
        col = exc.column - 1
        what = "the intercept" if col < 0 else f"input column {col}"
        raise SingularMatrixError(col, f"design matrix is rank deficient: {what} is collinear") from None
    resid = Y - A @ beta
    ssr = float(resid @ resid)
    sigma2 = ssr / (n - p)
    # cov(beta) = sigma2 (A'A)^-1 with A = Q R D, D = diag(norms)
    Rinv = solve_triangular(R, np.eye(p))
    se = np.sqrt(sigma2 * np.sum(Rinv**2, axis=1)) / norms
    return LinearModel(float(beta[0]), beta[1:], se, ssr, n)
