"""Tail-direction estimation for functional covariates.

The direction estimate at threshold y is the normalized empirical tail moment
v_hat(y) = (1/n) sum_i X_i phi(Y_i) 1{Y_i >= y} with test function
phi(y) = y^tau, evaluated at the random threshold y = Y_{n-k+1,n}.  The
covariance form F_bar(y) m_XY(y) - m_X(y) m_Y(y) solves the conditional
covariance maximization exactly and serves as the reference estimator.
Threshold selection maximizes the empirical tail correlation proxy r(k).
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DegenerateDirectionError, GridMismatchError, InsufficientDataError
from .funcspace import EPS_NORM_PER_POINT, FunctionSample, Grid
from .simulate import Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestFunction:
    """Power test function phi(y) = y^tau, defined for y > 0."""

    tau: float

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y <= 0):
            raise ValueError("test function is defined for y > 0 only")
        out = y**self.tau
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FeplsFit:
    """An estimated tail direction with its threshold diagnostics."""

    direction: FunctionSample
    k: int
    threshold: float      # Y_{n-k+1,n}
    tau: float
    raw_norm: float       # ||v_hat|| before normalization
    q: float              # integrability order used for the rate report
    rate: float           # delta_{n,k}; NaN when the link is unknown


def _as_matrix(X, grid: Optional[Grid]):
    """Coerce FunctionSamples or an (n, d) array to (matrix, grid)."""
    if isinstance(X, np.ndarray):
        if grid is None:
            raise ValueError("grid is required with raw array input")
        if X.ndim != 2 or X.shape[1] != grid.d:
            raise ValueError(f"X must have shape (n, {grid.d})")
        return X, grid
    samples = list(X)
    if not samples:
        raise ValueError("X must be nonempty")
    g = samples[0].grid
    for s in samples[1:]:
        if s.grid != g:
            raise GridMismatchError("X samples live on different grids")
    if grid is not None and grid != g:
        raise GridMismatchError("explicit grid disagrees with the samples")
    return np.stack([s.values for s in samples]), g


def tail_moment_scalar(W, Y, y: float) -> float:
    """(1/n) sum_i W_i 1{Y_i >= y}."""
    W = np.asarray(W, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if W.shape != Y.shape or W.ndim != 1:
        raise ValueError("W and Y must be 1-d arrays of equal length")
    if W.size == 0:
        raise ValueError("empty input")
    return float(W[Y >= y].sum()) / Y.size


def tail_moment_functional(X, weights, Y, y: float, grid: Optional[Grid] = None) -> FunctionSample:
    """Pointwise (1/n) sum_i X_i(x) w_i 1{Y_i >= y}."""
    mat, g = _as_matrix(X, grid)
    weights = np.asarray(weights, dtype=float)
    Y = np.asarray(Y, dtype=float)
    n = mat.shape[0]
    if weights.shape != (n,) or Y.shape != (n,):
        raise ValueError("weights and Y must match the number of curves")
    w = np.where(Y >= y, weights, 0.0)
    return FunctionSample(g, (w @ mat) / n)


def rate_delta(g_eval: float, k: int, n: int, q: float) -> float:
    """Theoretical rate delta_{n,k} = 1 / (g(y_{n,k}) * (k/n)^(1/q))."""
    if g_eval <= 0:
        raise ValueError(f"g_eval must be positive, got {g_eval}")
    if not 0 < k <= n:
        raise ValueError(f"k must lie in (0, n], got k={k}, n={n}")
    if q <= 2:
        raise ValueError(f"q must exceed 2, got {q}")
    return 1.0 / (g_eval * (k / n) ** (1.0 / q))


def fepls_direction(data: Dataset, phi: TestFunction, k: int, *,
                    q: float = 4.0, g_link=None) -> FeplsFit:
    """Estimate the tail direction at threshold Y_{n-k+1,n}.

    Tail observations with Y_i <= 0 (possible in real data) are dropped from
    the weighted sum with a logged warning, since the test function is only
    defined near +infinity.  The rate field uses the observed threshold as a
    plug-in argument of g; g defaults to y -> y^kappa when the dataset carries
    a model spec, and the rate is NaN when no link is known.
    """
    n = data.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, n] = [1, {n}], got {k}")
    Y = data.Y
    threshold = float(np.partition(Y, n - k)[n - k])  # Y_{n-k+1,n}
    tail = Y >= threshold
    usable = tail & (Y > 0)
    dropped = int(np.count_nonzero(tail) - np.count_nonzero(usable))
    if dropped:
        logger.warning("dropped %d tail observation(s) with non-positive response", dropped)
    if not np.any(usable):
        raise ValueError("no positive response among the top k observations")
    w = np.zeros(n)
    w[usable] = phi(Y[usable])
    v = (w @ data.X) / n
    raw_norm = float(np.sqrt(v @ v / data.grid.d))
    if raw_norm <= EPS_NORM_PER_POINT * data.grid.d:
        raise DegenerateDirectionError("tail moment is numerically zero")
    direction = FunctionSample(data.grid, v / raw_norm)

    rate = float("nan")
    if threshold > 0:
        if g_link is not None:
            g_eval = float(g_link(threshold))
        elif data.spec is not None:
            g_eval = float(threshold**data.spec.kappa)
        else:
            g_eval = float("nan")
        if np.isfinite(g_eval) and g_eval > 0:
            rate = rate_delta(g_eval, k, n, q)
    return FeplsFit(direction=direction, k=k, threshold=threshold, tau=phi.tau,
                    raw_norm=raw_norm, q=q, rate=rate)


def cov_direction(data: Dataset, y: float) -> FunctionSample:
    """Normalized empirical F_bar(y) m_XY(y) - m_X(y) m_Y(y).

    This is the exact maximizer of the empirical covariance of <w, X> and Y
    conditional on {Y >= y} over unit directions w.
    """
    n = data.n
    Y = data.Y
    ind = Y >= y
    if np.count_nonzero(ind) < 2:
        raise InsufficientDataError(f"need at least 2 exceedances above y={y}")
    fbar = np.count_nonzero(ind) / n
    w = ind.astype(float)
    m_xy = ((w * Y) @ data.X) / n
    m_x = (w @ data.X) / n
    m_y = float(w @ Y) / n
    v = fbar * m_xy - m_y * m_x
    raw_norm = float(np.sqrt(v @ v / data.grid.d))
    if raw_norm <= EPS_NORM_PER_POINT * data.grid.d:
        raise DegenerateDirectionError("covariance direction is numerically zero")
    return FunctionSample(data.grid, v / raw_norm)


def _descending_order(Y: np.ndarray) -> np.ndarray:
    """Stable descending permutation: ties keep the earliest original index first."""
    return np.argsort(-Y, kind="stable")


def correlation_curve(data: Dataset, phi: TestFunction, k_range: Iterable[int]) -> np.ndarray:
    """Empirical tail correlation proxy r(k) for each k.

    r(k) is the covariance, across the top k order statistics of Y, between
    Y_{n-i+1,n} and the projection of its concomitant on the direction
    estimated at threshold Y_{n-k+1,n}.  Concomitants of tied responses are
    resolved by the stable descending sort of Y.
    """
    ks = [int(k) for k in k_range]
    n = data.n
    if not ks:
        raise ValueError("k_range is empty")
    if min(ks) < 2 or max(ks) > n:
        raise ValueError(f"k_range must lie within [2, n] = [2, {n}]")
    order = _descending_order(data.Y)
    Ys = data.Y[order]
    Xs = data.X[order]
    d = data.grid.d
    out = np.empty(len(ks))
    for j, k in enumerate(ks):
        b = fepls_direction(data, phi, k).direction.values
        proj = (Xs[:k] @ b) / d
        yk = Ys[:k]
        out[j] = float(np.mean(yk * proj) - np.mean(yk) * np.mean(proj))
    return out


def select_k(data: Dataset, phi: TestFunction, mode: str, *, k_max: Optional[int] = None) -> int:
    """Threshold selection: argmax of r(k) (sim mode) or |r(k)| (data mode).

    The search range is [5, floor(n/5)] with the upper bound configurable;
    the lower bound 5 guards against small-k instability.  Ties break to the
    smallest k.  The mode is always an explicit caller choice.
    """
    if mode not in ("sim", "data"):
        raise ValueError(f"mode must be 'sim' or 'data', got {mode!r}")
    n = data.n
    if n < 25:
        raise InsufficientDataError(f"threshold selection needs n >= 25, got n={n}")
    if k_max is None:
        k_max = n // 5
    if not 5 <= k_max <= n:
        raise ValueError(f"k_max must lie in [5, n], got {k_max}")
    ks = range(5, k_max + 1)
    r = correlation_curve(data, phi, ks)
    score = r if mode == "sim" else np.abs(r)
    return 5 + int(np.argmax(score))  # argmax takes the first max: smallest k
