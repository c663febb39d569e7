"""Synthetic data from the inverse single-index model X = g(Y) beta + eps.

The response Y follows a Burr law, the link is g(y) = y^kappa, and the noise
is (conditionally on Y = y) a fractional Brownian motion on [0,1] scaled by
sigma(y) and shifted by a constant mean mu.  Observation i is generated from
its own counter-derived substream, so datasets are reproducible, streamable
and order-independent.
"""

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .burr import BurrLaw
from .errors import GridMismatchError, NumericalError
from .funcspace import FunctionSample, Grid, norm
from .rng import as_generator, substream


class AdmissibilityWarning(UserWarning):
    """The (kappa, tau, gamma) combination violates 0 < 2(kappa+tau)gamma < 1."""


def fbm_covariance(hurst: float, sigma: float, s: float, t: float) -> float:
    """Covariance (sigma^2/2)(t^2H + s^2H - |t-s|^2H) of scaled fBm at (s, t)."""
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must lie in (0,1), got {hurst}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
        raise ValueError(f"(s,t) must lie in [0,1]^2, got ({s}, {t})")
    h2 = 2.0 * hurst
    return 0.5 * sigma**2 * (t**h2 + s**h2 - abs(t - s) ** h2)


# Jitter ladder for the fBm Cholesky factor: the covariance matrix is
# near-singular for H far from 1/2 on fine grids.
_JITTER_BASE = 1e-12
_JITTER_ESCALATIONS = 3


@lru_cache(maxsize=16)
def _fbm_unit_cholesky(d: int, hurst: float) -> np.ndarray:
    """Cholesky factor of the unit-sigma fBm covariance on grid points > 0.

    Scaling by sigma afterwards is exact: Cov(sigma B) = sigma^2 Cov(B).
    """
    pts = Grid(d).points[1:]
    h2 = 2.0 * hurst
    cov = 0.5 * (
        pts[:, None] ** h2 + pts[None, :] ** h2 - np.abs(pts[:, None] - pts[None, :]) ** h2
    )
    jitter = _JITTER_BASE * float(np.max(np.diag(cov)))
    for _ in range(_JITTER_ESCALATIONS + 1):
        try:
            return np.linalg.cholesky(cov + jitter * np.eye(d - 1))
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise NumericalError(
        f"fBm covariance factorization failed for d={d}, H={hurst} after jitter escalation"
    )


def _fbm_values(L: np.ndarray, sigma: float, mu: float, rng: np.random.Generator) -> np.ndarray:
    """One fBm path on the full grid: pinned to mu at x=0, mu + sigma*L@z after."""
    z = rng.standard_normal(L.shape[0])
    values = np.empty(L.shape[0] + 1)
    values[0] = mu
    values[1:] = mu + sigma * (L @ z)
    return values


def sample_fbm(hurst: float, sigma: float, mu: float, grid: Grid, seed) -> FunctionSample:
    """One draw of mu + sigma * fBm(H) on the grid; deterministic given seed."""
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must lie in (0,1), got {hurst}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    L = _fbm_unit_cholesky(grid.d, hurst)
    return FunctionSample(grid, _fbm_values(L, sigma, mu, as_generator(seed)))


@dataclass(frozen=True)
class PowerSigma:
    """Noise scale rule sigma(y) = coeff * y^exponent (picklable, unlike a lambda)."""

    coeff: float
    exponent: float

    def __call__(self, y):
        if self.coeff == 0.0:
            return np.zeros_like(np.asarray(y, dtype=float)) if np.ndim(y) else 0.0
        return self.coeff * np.asarray(y, dtype=float) ** self.exponent


@dataclass(frozen=True)
class ModelSpec:
    """Generative model: Y ~ BurrLaw, X = Y^kappa * index + noise.

    sigma_rule defaults to y -> y^kappa / 10.  The admissibility condition
    0 < 2(kappa+tau)gamma < 1 is checked and reported as a warning, never an
    error: several documented experiment settings deliberately violate it.
    """

    law: BurrLaw
    kappa: float
    tau: float
    index: FunctionSample
    grid: Grid
    n: int
    hurst: float = 1.0 / 3.0
    mu: float = 200.0
    sigma_rule: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst must lie in (0,1), got {self.hurst}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.index.grid != self.grid:
            raise GridMismatchError("index is not sampled on the model grid")
        if abs(norm(self.index) - 1.0) > 1e-10:
            raise ValueError("index must have unit norm (within 1e-10)")
        if self.sigma_rule is None:
            object.__setattr__(self, "sigma_rule", PowerSigma(0.1, self.kappa))
        if not self.admissible:
            warnings.warn(
                f"2(kappa+tau)gamma = {self.admissibility_value:g} lies outside (0,1)",
                AdmissibilityWarning,
                stacklevel=2,
            )

    @property
    def admissibility_value(self) -> float:
        return 2.0 * (self.kappa + self.tau) * self.law.gamma

    @property
    def admissible(self) -> bool:
        return 0.0 < self.admissibility_value < 1.0

    def g(self, y):
        """Link function g(y) = y^kappa."""
        return np.asarray(y, dtype=float) ** self.kappa

    @classmethod
    def standard(cls, law: BurrLaw, kappa: float, tau: float, d: int, n: int, **kwargs) -> "ModelSpec":
        """ModelSpec on Grid(d) with the default index sqrt(2) sin(2 pi t)."""
        grid = Grid(d)
        return cls(law=law, kappa=kappa, tau=tau, index=default_index(grid),
                   grid=grid, n=n, **kwargs)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed pairs: X rows are curves on `grid`, Y the scalar responses."""

    grid: Grid
    X: np.ndarray            # shape (n, d)
    Y: np.ndarray            # shape (n,)
    noise: Optional[np.ndarray] = None
    spec: Optional[ModelSpec] = None
    seed: Optional[object] = None
    start: int = 0

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.grid.d:
            raise ValueError(f"X must have shape (n, {self.grid.d}), got {X.shape}")
        if Y.shape != (X.shape[0],):
            raise ValueError(f"Y must have shape ({X.shape[0]},), got {Y.shape}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
            raise ValueError("X and Y must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        if self.noise is not None:
            noise = np.asarray(self.noise, dtype=float)
            if noise.shape != X.shape:
                raise ValueError("noise must have the same shape as X")
            object.__setattr__(self, "noise", noise)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def function_sample(self, i: int) -> FunctionSample:
        return FunctionSample(self.grid, self.X[i])


def generate(spec: ModelSpec, seed, start: int = 0) -> Dataset:
    """Draw spec.n observations; observation i uses substream (seed, start+i).

    The per-observation substream is split once for the response draw and once
    for the noise draw, so the stored noise row i is bitwise the output of
    sample_fbm(hurst, sigma(Y_i), mu, grid, substream(seed, start+i).spawn(2)[1]).
    """
    d = spec.grid.d
    L = _fbm_unit_cholesky(d, spec.hurst)
    beta = spec.index.values
    X = np.empty((spec.n, d))
    Y = np.empty(spec.n)
    noise = np.empty((spec.n, d))
    for i in range(spec.n):
        y_ss, eps_ss = substream(seed, start + i).spawn(2)
        y = float(spec.law.sample(1, y_ss)[0])
        sigma = float(spec.sigma_rule(y))
        if sigma < 0:
            raise ValueError(f"sigma_rule produced a negative scale at y={y}")
        eps = _fbm_values(L, sigma, spec.mu, as_generator(eps_ss))
        Y[i] = y
        noise[i] = eps
        X[i] = y**spec.kappa * beta + eps
    return Dataset(grid=spec.grid, X=X, Y=Y, noise=noise, spec=spec, seed=seed, start=start)


def default_index(grid: Grid, renormalize: bool = True) -> FunctionSample:
    """The index t -> sqrt(2) sin(2 pi t) on the grid.

    With renormalize=True (default) the values are rescaled to unit discrete
    norm, so the model constraint ||beta|| = 1 holds exactly at finite d.
    """
    values = np.sqrt(2.0) * np.sin(2.0 * np.pi * grid.points)
    sample = FunctionSample(grid, values)
    if not renormalize:
        return sample
    return FunctionSample(grid, values / norm(sample))
