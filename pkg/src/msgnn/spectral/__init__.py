from .eigen import (
    DENSE_CAP,
    DimensionTooLargeError,
    EigenDecomposition,
    NonConvergenceError,
    eigh,
    lambda_max,
)
from .filters import cheb_apply, spectral_embed
from .kmeans import kmeans

__all__ = [
    "DENSE_CAP",
    "DimensionTooLargeError",
    "EigenDecomposition",
    "NonConvergenceError",
    "cheb_apply",
    "eigh",
    "kmeans",
    "lambda_max",
    "spectral_embed",
]
