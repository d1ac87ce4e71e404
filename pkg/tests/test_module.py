import numpy as np
import pytest
from hypothesis import given, strategies as st

from framelab import algebra as alg
from framelab.algebra import AlgebraElement, diagonal, matrix
from framelab.errors import InvalidOperandError, UnsupportedAlgebraError
from framelab.module import (
    ModuleFrame,
    ModuleVector,
    a_combination,
    check_module_axioms,
    inner,
    is_a_independent,
    module_action,
    module_frame_bounds,
    random_vector,
    zero_vector,
)

D2 = diagonal(2)
X = ModuleVector(D2, [[1, 2], [0, 1]])
Z = ModuleVector(D2, [[1, 1], [0, 0]])


def test_inner_examples():
    np.testing.assert_allclose(inner(X, Z).data, [1, 2])
    np.testing.assert_allclose(inner(X, X).data, [1, 5])
    assert alg.norm(inner(X, zero_vector(D2, 2))) == 0


def test_module_action():
    a = AlgebraElement(D2, [2, 3])
    x = ModuleVector(D2, [[1, 1], [0, 1]])
    assert module_action(a, x).allclose(ModuleVector(D2, [[2, 3], [0, 3]]))
    assert module_action(alg.unit(D2), x).allclose(x)
    assert module_action(alg.zero(D2), x).allclose(zero_vector(D2, 2))


def test_a_combinations():
    e = alg.unit(D2)
    assert a_combination([e], [X]).allclose(X)
    assert a_combination([e, -1 * e], [X, X]).allclose(zero_vector(D2, 2))
    e1, e2 = ModuleVector(D2, [[1, 1], [0, 0]]), ModuleVector(D2, [[0, 0], [1, 1]])
    mixed = a_combination([AlgebraElement(D2, [1, 0]), AlgebraElement(D2, [0, 1])], [e1, e2])
    assert mixed.allclose(ModuleVector(D2, [[1, 0], [0, 1]]))


def test_independence():
    xi = ModuleVector(D2, [[1, 1], [0, 0]])
    x = ModuleVector(D2, [[0, 0], [1, 1]])
    assert is_a_independent([xi, x])
    assert not is_a_independent([xi, module_action(AlgebraElement(D2, [2, -1]), xi)])
    assert not is_a_independent([x, zero_vector(D2, 2)])
    with pytest.raises(UnsupportedAlgebraError):
        is_a_independent([ModuleVector(matrix(2), np.zeros((2, 2, 2)))])


def test_shape_mismatch():
    with pytest.raises(InvalidOperandError):
        inner(X, ModuleVector(D2, [[1, 2], [0, 1], [1, 1]]))


def test_module_frame_bounds_orthonormal():
    e = [ModuleVector(diagonal(1), [[1], [0]]), ModuleVector(diagonal(1), [[0], [1]])]
    assert module_frame_bounds(ModuleFrame(tuple(e))) == pytest.approx((1, 1))


@pytest.mark.parametrize("n,m", [(1, 2), (3, 4)])
def test_module_axioms_hold(n, m):
    for r in check_module_axioms(diagonal(n), m, 200, 0, 1e-9):
        assert r["pass"], r


def test_module_axioms_vacuous():
    records = check_module_axioms(diagonal(2), 3, 0, 0, 1e-9)
    assert all(r["pass"] and r["worst_residual"] is None for r in records)


@given(st.integers(0, 2**32 - 1), st.sampled_from([diagonal(1), diagonal(3), matrix(2)]))
def test_inner_sesquilinear(seed, desc):
    rng = np.random.default_rng(seed)
    x, y = random_vector(desc, 3, rng), random_vector(desc, 3, rng)
    a, b = alg.random_element(desc, rng), alg.random_element(desc, rng)
    lhs = inner(module_action(a, x), module_action(b, y))
    assert lhs.allclose(a * inner(x, y) * b.adjoint(), atol=1e-10)
    assert inner(y, x).allclose(inner(x, y).adjoint(), atol=1e-12)
