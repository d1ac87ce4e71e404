"""scikit-learn style facade over :class:`~framelab.frames.TwoFrame`.

Samples are module vectors over ``diagonal(n)`` given by their point
values, an array of shape ``(n_samples, n, m)``; for ``n = 1`` a plain
``(n_samples, m)`` array is accepted.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .frames import TwoFrame, analysis, frame_inverse_apply, optimal_bounds, synthesis
from .algebra import AlgebraElement
from .quotient import project
from .validation import check_associate, check_points, to_vectors


class TwoFrameTransformer(TransformerMixin, BaseEstimator):
    """Analysis operator of the A-2-frame formed by the rows passed to ``fit``.

    ``transform`` returns the coefficients ``<x, x_i | xi>`` with shape
    ``(n_samples, n_points, N)``; ``inverse_transform`` synthesizes and applies
    the inverse frame operator, which recovers ``x`` modulo the span of ``xi``.

    Parameters
    ----------
    associate : array of shape (n_points, m) or (m,)
    tol : relative tolerance of the frame test
    """

    def __init__(self, associate=None, tol: float = 1e-10):
        self.associate = associate
        self.tol = tol

    def fit(self, X, y=None):
        arr = check_points(X)
        n, m = arr.shape[1:]
        if self.associate is None:
            raise ValueError("associate must be set before fit")
        xi = check_associate(self.associate, n, m)
        frame = TwoFrame(to_vectors(arr, xi.algebra), xi, check_independence=False, tol=self.tol)
        self.bounds_ = optimal_bounds(frame, self.tol)
        self.frame_ = frame
        self.operators_ = frame.operators
        self.n_points_, self.rank_ = n, m
        self.n_features_in_ = m
        return self

    def transform(self, X):
        check_is_fitted(self, "frame_")
        arr = check_points(X, self.n_points_, self.rank_)
        out = np.empty((arr.shape[0], self.n_points_, len(self.frame_)), dtype=complex)
        for s, x in enumerate(to_vectors(arr, self.frame_.algebra)):
            coeffs = analysis(self.frame_, x)
            out[s] = np.stack([c.data for c in coeffs], axis=-1) if coeffs else 0.0
        return out

    def inverse_transform(self, C):
        check_is_fitted(self, "frame_")
        C = np.asarray(C, dtype=complex)
        if C.ndim == 2:
            C = C[:, None, :]
        f = self.frame_
        if C.ndim != 3 or C.shape[1:] != (self.n_points_, len(f)):
            raise ValueError(f"coefficients must have shape (n_samples, {self.n_points_}, {len(f)})")
        out = np.empty((C.shape[0], self.n_points_, self.rank_), dtype=complex)
        for s, c in enumerate(C):
            coeffs = [AlgebraElement(f.algebra, c[:, i]) for i in range(len(f))]
            out[s] = frame_inverse_apply(f, synthesis(f, coeffs), self.tol).points()
        return out

    def project(self, X):
        """Representatives of ``X`` in the complement of the associate."""
        check_is_fitted(self, "frame_")
        arr = check_points(X, self.n_points_, self.rank_)
        q = self.frame_.quotient
        return np.stack([project(x, q).points() for x in to_vectors(arr, self.frame_.algebra)])
