"""Input checks shared by the estimator facade."""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraDescriptor, diagonal
from .errors import InvalidOperandError
from .module import ModuleVector


def check_points(X, n_points: int = None, rank: int = None, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a complex array of shape ``(n_samples, n_points, rank)``.

    A 2-D array is read as samples over the scalars (one point).
    """
    arr = np.asarray(X)
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.number):
        raise InvalidOperandError(f"{name} must be numeric")
    arr = arr.astype(complex)
    if arr.ndim == 2:
        arr = arr[:, None, :]
    if arr.ndim != 3:
        raise InvalidOperandError(f"{name} must have shape (n_samples, rank) or (n_samples, n_points, rank)")
    if not np.all(np.isfinite(arr)):
        raise InvalidOperandError(f"{name} contains non-finite values")
    if n_points is not None and arr.shape[1] != n_points:
        raise InvalidOperandError(f"{name} has {arr.shape[1]} points, expected {n_points}")
    if rank is not None and arr.shape[2] != rank:
        raise InvalidOperandError(f"{name} has rank {arr.shape[2]}, expected {rank}")
    return arr


def check_associate(xi, n_points: int, rank: int) -> ModuleVector:
    if isinstance(xi, ModuleVector):
        if xi.algebra.concrete != ("diagonal", n_points) or xi.rank != rank:
            raise InvalidOperandError("associate does not match the data shape")
        return xi
    pts = check_points(np.asarray(xi)[None], n_points, rank, name="associate")[0]
    return ModuleVector.from_points(diagonal(n_points), pts)


def to_vectors(arr: np.ndarray, algebra: AlgebraDescriptor) -> list[ModuleVector]:
    return [ModuleVector.from_points(algebra, a) for a in arr]
