"""Twist flows, action-angle coordinates and cone-surface holonomy for surface groups.

The backend for the hot kernels is chosen with ``CONETWIST_BACKEND``
(``numba`` when available, else ``numpy``); see :mod:`conetwist._kernels`.
"""

from ._kernels import BACKEND
from .errors import (
    ChartError, ConeTwistError, DegenerateError, NotConjugateError, NumericalError, PreconditionError,
    ReducibleError, SingularMatrixError,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChartError",
    "ConeTwistError",
    "DegenerateError",
    "NotConjugateError",
    "NumericalError",
    "PreconditionError",
    "ReducibleError",
    "SingularMatrixError",
]
