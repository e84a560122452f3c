"""Numerical laboratory for pseudo-bosonic operator pairs, bi-coherent
states, the generalized kq-representation, and von Neumann lattice
completeness experiments on truncated Fock spaces."""

from ._backend import BACKEND
from .fock import (
    GridFunction,
    PositionGrid,
    default_grid,
    hermite_grid,
    hermite_synthesis,
    ladder_matrices,
    matrix_exp,
    quadrature_matrices,
)
from .pseudoboson import (
    PseudoBosonSystem,
    SystemSpec,
    build_system,
    norm_growth_fit,
    quasi_basis_residual,
    verify_structure,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GridFunction",
    "PositionGrid",
    "PseudoBosonSystem",
    "SystemSpec",
    "build_system",
    "default_grid",
    "hermite_grid",
    "hermite_synthesis",
    "ladder_matrices",
    "matrix_exp",
    "norm_growth_fit",
    "quadrature_matrices",
    "quasi_basis_residual",
    "verify_structure",
]
