"""Discretized L2([0,1]) primitives: regular grids, inner products, normalization.

Functions on [0,1] are represented by their values on a regular grid
0 = x_1 < ... < x_d = 1 and compared with the discrete inner product
<a, b> = (1/d) * sum_k a(x_k) b(x_k).  The weight is exactly 1/d (no
trapezoidal end corrections), so estimator values are reproducible
bit-for-bit at fixed d.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateDirectionError, GridMismatchError

# Degeneracy threshold for normalize(); guards division underflow without
# rejecting legitimately tiny directions.
EPS_NORM_PER_POINT = 1e-300


@dataclass(frozen=True)
class Grid:
    """Regular grid 0 = x_1 < ... < x_d = 1 with d points."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"grid needs at least 2 points, got d={self.d}")

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.d)

    @classmethod
    def from_points(cls, points) -> "Grid":
        """Build a Grid from explicit points, validating regularity."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("points must be a 1-d array of length >= 2")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        spacing = np.diff(pts)
        ref = 1.0 / (pts.size - 1)
        if np.max(np.abs(spacing - ref)) > 1e-12 * ref:
            raise ValueError("grid spacing must be uniform to within 1e-12 relative")
        return cls(pts.size)


@dataclass(frozen=True, eq=False)
class FunctionSample:
    """A function on [0,1] sampled on a Grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size != self.grid.d:
            raise ValueError(
                f"values must have length d={self.grid.d}, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must all be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.grid.d


def _check_same_grid(a: FunctionSample, b: FunctionSample) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(
            f"grids differ: d={a.grid.d} vs d={b.grid.d}"
        )


def inner_product(a: FunctionSample, b: FunctionSample) -> float:
    """Discrete inner product (1/d) * sum_k a(x_k) b(x_k)."""
    _check_same_grid(a, b)
    return float(a.values @ b.values) / a.grid.d


def norm(a: FunctionSample) -> float:
    """Norm induced by the discrete inner product."""
    return float(np.sqrt(a.values @ a.values / a.grid.d))


def normalize(a: FunctionSample) -> FunctionSample:
    """Rescale to unit norm; raises on (numerically) zero input."""
    na = norm(a)
    if na <= EPS_NORM_PER_POINT * a.grid.d:
        raise DegenerateDirectionError(f"cannot normalize: norm {na!r} is degenerate")
    return FunctionSample(a.grid, a.values / na)


def orthogonalize(a: FunctionSample, against: FunctionSample) -> FunctionSample:
    """One Gram-Schmidt step: the unit direction of a minus its projection on `against`.

    `against` must have unit norm; collinear inputs are degenerate.
    """
    _check_same_grid(a, against)
    residual = a.values - inner_product(a, against) * against.values
    return normalize(FunctionSample(a.grid, residual))


def write_function_csv(path, sample: FunctionSample) -> None:
    """Serialize as a single CSV column of d values (grid implied by row count)."""
    with open(path, "w") as fh:
        fh.write("\n".join(repr(float(v)) for v in sample.values))
        fh.write("\n")


def read_function_csv(path) -> FunctionSample:
    """Read a single-column CSV back into a FunctionSample on Grid(row count)."""
    values = np.loadtxt(path, dtype=float, ndmin=1)
    if values.ndim != 1:
        raise ValueError("expected a single column of values")
    return FunctionSample(Grid(values.size), values)
