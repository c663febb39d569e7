"""Burr distribution and univariate tail diagnostics.

The Burr law has survival function F_bar(y) = (1 + y^(-rho/gamma))^(1/rho)
with tail index gamma in (0,1) and second-order parameter rho < 0.  Its tail
quantile function U(t) = F^-(1 - 1/t) admits the closed form
U(t) = (t^(-rho) - 1)^(-gamma/rho), which drives exact inverse-transform
sampling.  The auxiliary function A(t) = gamma * t^rho / (1 - t^rho) controls
the second-order convergence U(ty)/U(t) - y^gamma ~ A(t) * y^gamma * H_rho(y).
"""

from dataclasses import dataclass

import numpy as np

from .rng import as_generator


@dataclass(frozen=True)
class BurrLaw:
    gamma: float
    rho: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0,1), got {self.gamma}")
        if not self.rho < 0.0:
            raise ValueError(f"rho must be negative, got {self.rho}")

    def survival(self, y):
        """F_bar(y) = (1 + y^(-rho/gamma))^(1/rho) for y >= 0."""
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ValueError("survival requires y >= 0")
        out = (1.0 + y ** (-self.rho / self.gamma)) ** (1.0 / self.rho)
        return float(out) if out.ndim == 0 else out

    def cdf(self, y):
        return 1.0 - self.survival(y)

    def density(self, y):
        """f(y) = (1/gamma) y^(-rho/gamma - 1) (1 + y^(-rho/gamma))^(1/rho - 1) for y > 0."""
        y = np.asarray(y, dtype=float)
        if np.any(y <= 0):
            raise ValueError("density requires y > 0")
        a = -self.rho / self.gamma
        out = (1.0 / self.gamma) * y ** (a - 1.0) * (1.0 + y ** a) ** (1.0 / self.rho - 1.0)
        return float(out) if out.ndim == 0 else out

    def tail_quantile(self, t):
        """U(t) = (t^(-rho) - 1)^(-gamma/rho) for t > 1; survival(U(t)) = 1/t."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 1):
            raise ValueError("tail_quantile requires t > 1")
        out = (t ** (-self.rho) - 1.0) ** (-self.gamma / self.rho)
        return float(out) if out.ndim == 0 else out

    def auxiliary(self, t):
        """Second-order auxiliary function A(t) = gamma * t^rho / (1 - t^rho)."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 1):
            raise ValueError("auxiliary requires t > 1")
        tr = t ** self.rho
        out = self.gamma * tr / (1.0 - tr)
        return float(out) if out.ndim == 0 else out

    def sample(self, n: int, seed) -> np.ndarray:
        """n i.i.d. draws via inverse transform U(1/V), V ~ Uniform(0,1)."""
        if n < 1:
            raise ValueError(f"sample size must be >= 1, got {n}")
        rng = as_generator(seed)
        v = rng.uniform(size=n)
        return self.tail_quantile(1.0 / v)


def second_order_check(law: BurrLaw, y: float, t_values) -> np.ndarray:
    """(U(ty)/U(t) - y^gamma) / A(t) for each t; approaches y^gamma * (y^rho - 1)/rho."""
    if y <= 0:
        raise ValueError("second_order_check requires y > 0")
    t = np.asarray(t_values, dtype=float)
    if np.any(t <= 1):
        raise ValueError("second_order_check requires t > 1")
    if np.any(t * y <= 1):
        raise ValueError("t*y must exceed 1 so the tail quantile is defined")
    ratio = law.tail_quantile(t * y) / law.tail_quantile(t)
    return (ratio - y ** law.gamma) / law.auxiliary(t)


@dataclass(frozen=True)
class SortedSample:
    """Order statistics Y_{1,n} <= ... <= Y_{n,n} of a univariate sample."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("values must be a nonempty 1-d array")
        if np.any(np.diff(vals) < 0):
            raise ValueError("values must be sorted ascending")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.size

    @classmethod
    def from_values(cls, values) -> "SortedSample":
        vals = np.asarray(values, dtype=float)
        return cls(np.sort(vals, kind="stable"))

    def order_statistic(self, i: int) -> float:
        """Y_{i,n} with 1-based index i."""
        if not 1 <= i <= self.n:
            raise ValueError(f"order statistic index must lie in [1, {self.n}]")
        return float(self.values[i - 1])


def _check_hill_args(sample: SortedSample, k: int) -> float:
    n = sample.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, n-1] = [1, {n - 1}], got {k}")
    threshold = sample.values[n - k - 1]  # Y_{n-k,n}, the (k+1)-th largest
    if threshold <= 0:
        raise ValueError(f"Y_(n-k,n) = {threshold} must be positive")
    return float(threshold)


def hill(sample: SortedSample, k: int) -> float:
    """Hill estimator: mean log-excess of the top k values over Y_{n-k,n}."""
    threshold = _check_hill_args(sample, k)
    top = sample.values[sample.n - k:]
    return float(np.mean(np.log(top)) - np.log(threshold))


@dataclass(frozen=True)
class QQPlotData:
    """Exponential QQ plot of log-excesses with its through-origin fit."""

    abscissa: np.ndarray   # log((k+1)/i), i = 1..k
    ordinate: np.ndarray   # log(Y_{n-i+1,n} / Y_{n-k,n})
    slope: float           # least-squares through the origin

    @property
    def pairs(self) -> np.ndarray:
        return np.column_stack([self.abscissa, self.ordinate])


def qq_plot_data(sample: SortedSample, k: int) -> QQPlotData:
    """Pairs (log((k+1)/i), log(Y_{n-i+1,n}/Y_{n-k,n})) for i = 1..k."""
    threshold = _check_hill_args(sample, k)
    i = np.arange(1, k + 1, dtype=float)
    top_desc = sample.values[::-1][:k]  # Y_{n,n}, Y_{n-1,n}, ..., Y_{n-k+1,n}
    x = np.log((k + 1) / i)
    y = np.log(top_desc / threshold)
    slope = float((x @ y) / (x @ x))
    return QQPlotData(abscissa=x, ordinate=y, slope=slope)
