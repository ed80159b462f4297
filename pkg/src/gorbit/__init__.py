"""Geodesic orbit metrics on compact pair spaces (G1 x G2)/diag(K)."""
from .algebra import LieAlgebra, bracket, build_classical, minus_killing, orthonormalize
from .errors import GorbitError
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GorbitError",
    "LieAlgebra",
    "bracket",
    "build_classical",
    "minus_killing",
    "orthonormalize",
]
