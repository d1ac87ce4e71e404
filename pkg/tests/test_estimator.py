import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from framelab.errors import InvalidOperandError, NotAFrameError
from framelab.estimator import TwoFrameTransformer


X3 = np.array([[0, 1, 0], [0, 0, 1], [0, 1, 1]])


def test_fit_learns_bounds():
    t = TwoFrameTransformer(associate=[1, 0, 0]).fit(X3)
    assert t.bounds_ == pytest.approx((1, 3))
    assert t.operators_.frame_matrix.shape == (1, 2, 2)


def test_transform_and_inverse(rng):
    t = TwoFrameTransformer(associate=[1, 0, 0]).fit(X3)
    C = t.transform([[0, 1, 0]])
    np.testing.assert_allclose(C[0, 0], [1, 0, 1])
    Y = rng.standard_normal((5, 3))
    np.testing.assert_allclose(t.inverse_transform(t.transform(Y)), t.project(Y), atol=1e-10)


def test_multi_point_data(rng):
    X = rng.standard_normal((6, 2, 4)) + 1j * rng.standard_normal((6, 2, 4))
    xi = rng.standard_normal((2, 4))
    t = TwoFrameTransformer(associate=xi).fit(X)
    Y = rng.standard_normal((3, 2, 4))
    assert t.transform(Y).shape == (3, 2, 6)
    np.testing.assert_allclose(t.inverse_transform(t.transform(Y)), t.project(Y), atol=1e-9)


def test_errors():
    with pytest.raises(NotFittedError):
        TwoFrameTransformer(associate=[1, 0, 0]).transform(X3)
    with pytest.raises(ValueError):
        TwoFrameTransformer().fit(X3)
    with pytest.raises(NotAFrameError):
        TwoFrameTransformer(associate=[1, 0, 0]).fit([[0, 1, 0]])
    t = TwoFrameTransformer(associate=[1, 0, 0]).fit(X3)
    with pytest.raises(InvalidOperandError):
        t.transform([[1, 2]])
    with pytest.raises(InvalidOperandError):
        t.transform([[np.nan, 0, 0]])


def test_sklearn_params():
    t = TwoFrameTransformer(associate=[1, 0, 0], tol=1e-8)
    assert t.get_params() == {"associate": [1, 0, 0], "tol": 1e-8}
    assert clone(t).tol == 1e-8
