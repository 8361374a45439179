"""Numerical toolkit for selfadjoint extensions of the diagonal operator on
zero-sum sequences and their finite-point generalizations."""
from . import boundary, extfinite, forms, specfun, spectral11
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateSetError,
    DimensionError,
    DomainError,
    HardyExtError,
    PoleError,
    QuadratureError,
    RadiusError,
    RepresentationError,
    UnlistedPoleError,
)
from .specfun import CONSTANTS, K

__version__ = "0.1.0"

__all__ = [
    "boundary",
    "extfinite",
    "forms",
    "specfun",
    "spectral11",
    "CONSTANTS",
    "K",
    "HardyExtError",
    "PoleError",
    "BracketError",
    "DomainError",
    "QuadratureError",
    "ConvergenceError",
    "DegenerateSetError",
    "DimensionError",
    "RadiusError",
    "RepresentationError",
    "UnlistedPoleError",
]
