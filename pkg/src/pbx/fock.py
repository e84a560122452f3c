"""Finite-dimensional substrate: truncated ladder operators, position grids,
Hermite-function synthesis and matrix exponentials.

Everything here works with plain numpy arrays.  Operators are dense
complex ``(dim, dim)`` matrices, states are complex ``(dim,)`` vectors
of coordinates in the orthonormal number basis.  The truncated
commutator ``[c, c^dag]`` equals the identity except for the well-known
``-dim`` defect in the last diagonal entry; consumers are expected to
restrict algebraic identities to a low-index "safe block".
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import kernels
from .errors import DimensionError, NumericInputError

__all__ = [
    "ladder_matrices",
    "quadrature_matrices",
    "PositionGrid",
    "GridFunction",
    "default_grid",
    "nyquist_spacing",
    "hermite_grid",
    "hermite_table",
    "hermite_synthesis",
    "matrix_exp",
]


def ladder_matrices(dim):
    """Truncated annihilation/creation pair (c, c_dag) at size ``dim``.

    c has sqrt(n+1) on the superdiagonal; c_dag is its conjugate
    transpose.  ``[c, c_dag] - I`` vanishes except for the entry
    ``-dim`` at (dim-1, dim-1).
    """
    if int(dim) != dim or dim < 2:
        raise DimensionError(f"truncation size must be an integer >= 2, got {dim}")
    dim = int(dim)
    c = np.zeros((dim, dim), dtype=np.complex128)
    n = np.arange(dim - 1)
    c[n, n + 1] = np.sqrt(n + 1.0)
    return c, c.conj().T.copy()


def quadrature_matrices(dim):
    """Hermitian position/momentum pair x0 = (c+c†)/√2, p0 = (c−c†)/(i√2)."""
    c, cdag = ladder_matrices(dim)
    x0 = (c + cdag) / np.sqrt(2.0)
    p0 = (c - cdag) / (1j * np.sqrt(2.0))
    return x0, p0


@dataclass(frozen=True)
class PositionGrid:
    """Uniform grid on [x_min, x_max] with n_points samples."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise DimensionError(f"grid needs at least 2 points, got {self.n_points}")
        if not (self.x_max > self.x_min):
            raise NumericInputError("grid requires x_max > x_min")

    @property
    def h(self):
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self):
        return self.x_min + self.h * np.arange(self.n_points)


@dataclass
class GridFunction:
    """Complex samples of a function on a PositionGrid."""

    grid: PositionGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.n_points,):
            raise DimensionError(
                f"values shape {self.values.shape} does not match grid with "
                f"{self.grid.n_points} points"
            )

    def norm(self):
        """Grid 2-norm, i.e. sqrt(h * sum |f|^2) (trapezoid-free variant)."""
        return float(np.sqrt(self.grid.h * np.sum(np.abs(self.values) ** 2)))

    def inner(self, other):
        """Grid inner product h * sum(conj(self) * other)."""
        return complex(self.grid.h * np.vdot(self.values, other.values))


def default_grid(dim):
    """Grid [−L_x, L_x] with L_x = sqrt(2 dim) + 4 and 8·dim points.

    Covers the classical turning point of the highest retained mode.
    """
    half = np.sqrt(2.0 * dim) + 4.0
    return PositionGrid(-half, half, 8 * int(dim))


def nyquist_spacing(dim):
    """Recommended maximum grid spacing resolving mode dim−1."""
    return np.pi / (2.0 * np.sqrt(2.0 * dim + 1.0))


def hermite_table(dim, grid):
    """(dim, n_points) table of orthonormal Hermite functions on ``grid``.

    Emits a resolution warning (not an error) when the spacing exceeds
    the Nyquist bound for the highest mode.
    """
    if int(dim) < 1:
        raise DimensionError(f"need at least one mode, got {dim}")
    if grid.h > nyquist_spacing(dim):
        warnings.warn(
            f"grid spacing {grid.h:.4g} exceeds the recommended "
            f"{nyquist_spacing(dim):.4g} for {dim} modes; "
            "high modes are under-resolved",
            stacklevel=2,
        )
    return kernels.hermite_table(grid.points, int(dim))


def hermite_grid(dim, grid):
    """The first ``dim`` Hermite functions as a list of GridFunction."""
    table = hermite_table(dim, grid)
    return [GridFunction(grid, row) for row in table]


def hermite_synthesis(coeffs, grid):
    """Synthesize sum_n coeffs[n] psi_n(x) on ``grid`` as a GridFunction."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    table = hermite_table(coeffs.size, grid)
    return GridFunction(grid, coeffs @ table)


def matrix_exp(M):
    """Matrix exponential of a dense complex square matrix.

    Delegates to scipy's scaling-and-squaring Pade implementation, which
    is stable for the non-normal generators built from (a, b); no
    eigendecomposition path is used.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"matrix_exp expects a square matrix, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericInputError("matrix_exp input has non-finite entries")
    return scipy.linalg.expm(M)
