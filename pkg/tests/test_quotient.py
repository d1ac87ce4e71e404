import numpy as np
import pytest
from hypothesis import given, strategies as st

from framelab import algebra as alg
from framelab.algebra import AlgebraElement, diagonal, matrix
from framelab.errors import NotInvertibleError, UnsupportedAlgebraError
from framelab.module import ModuleVector, inner, module_action, random_vector
from framelab.quotient import AssociateForm, build_quotient, pivot_complement, project, range_quotient

C = diagonal(1)


def vec(*c):
    return ModuleVector(C, [[v] for v in c])


def test_project_scalar_case():
    q = build_quotient(vec(1, 0, 0))
    assert project(vec(5, 1, 2), q).allclose(vec(0, 1, 2))
    assert project(vec(3, 0, 0), q).allclose(vec(0, 0, 0))


def test_project_diagonal_case():
    D2 = diagonal(2)
    q = build_quotient(ModuleVector(D2, [[1, 1], [0, 0]]))
    out = project(ModuleVector(D2, [[1, 2], [0, 1]]), q)
    assert out.allclose(ModuleVector(D2, [[0, 0], [0, 1]]))


def test_complement_of_e1():
    q = build_quotient(vec(1, 0, 0))
    assert q.dim == 2
    np.testing.assert_allclose(q.gram_xi[0], np.eye(2), atol=1e-15)
    B = q.basis[0]
    np.testing.assert_allclose(np.abs(B[1:, :]), np.eye(2), atol=1e-15)


def test_build_quotient_errors():
    with pytest.raises(NotInvertibleError):
        build_quotient(ModuleVector(diagonal(2), [[1, 0], [0, 0]]))
    with pytest.raises(UnsupportedAlgebraError):
        build_quotient(ModuleVector(matrix(2), np.eye(2)[None].repeat(2, 0)))


def test_rank_two_gives_one_dimensional_complement(rng):
    q = build_quotient(random_vector(diagonal(3), 2, rng))
    assert q.dim == 1


def test_pivot_complement_is_orthonormal(rng):
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    U = pivot_complement(v)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(v.conj() @ U, 0, atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(2, 5))
def test_quotient_invariants(seed, n, m):
    rng = np.random.default_rng(seed)
    xi = random_vector(diagonal(n), m, rng)
    q = build_quotient(xi)
    for b in q.complement_basis:
        assert alg.norm(inner(b, xi)) <= 1e-10
    assert np.all(np.linalg.eigvalsh(q.gram_xi) > 0)
    x = random_vector(diagonal(n), m, rng)
    p = project(x, q)
    assert project(p, q).allclose(p, atol=1e-10)
    a = alg.random_element(diagonal(n), rng)
    assert project(module_action(a, xi), q).allclose(0 * xi, atol=1e-10)
    # the semi-inner product only sees the class of x
    assert q.semi_inner(x, x).allclose(q.semi_inner(p, p), atol=1e-9)


def test_range_quotient_matches_standard(rng):
    xi = random_vector(diagonal(2), 3, rng)
    q1, q2 = build_quotient(xi), range_quotient(AssociateForm.standard(xi))
    x = random_vector(diagonal(2), 3, rng)
    assert project(x, q1).allclose(project(x, q2), atol=1e-10)
