import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from framelab import algebra as alg
from framelab.algebra import AlgebraElement, diagonal
from framelab.errors import FramelabError, InvalidOperandError, NotAFrameError, NotInvertibleError, DegenerateInputError
from framelab.frames import (
    TwoFrame,
    analysis,
    dual_coefficients,
    frame_bounds,
    frame_operator_apply,
    frame_operator_norm,
    from_module_frame,
    is_frame,
    mixed_associate_check,
    optimal_bounds,
    reconstruct,
    restrict_to_complement_frame,
    synthesis,
    synthesis_operator_norm,
    tightness_from_reconstruction,
    verify_bounds,
)
from framelab.instances import random_frame
from framelab.module import ModuleFrame, ModuleVector, module_frame_bounds, random_vector, vector_norm
from framelab.quotient import project

C = diagonal(1)


def vec(*c):
    return ModuleVector(C, [[v] for v in c])


E1, E2, E3 = vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1)


@pytest.fixture
def f3():
    return TwoFrame([E2, E3, E2 + E3], E1)


def coeffs(*vals):
    return [AlgebraElement(C, [v]) for v in vals]


def test_analysis_and_synthesis(f3):
    np.testing.assert_allclose([c.data[0] for c in analysis(f3, E2)], [1, 0, 1])
    assert all(alg.norm(c) == 0 for c in analysis(f3, E1 * 3))
    assert synthesis(f3, coeffs(1, 0, 1)).allclose(vec(0, 2, 1))
    assert synthesis(f3, coeffs(0, 0, 0)).allclose(vec(0, 0, 0))
    single = TwoFrame([E2], E1)
    assert synthesis(single, coeffs(1)).allclose(E2)


def test_frame_operator(f3):
    assert frame_operator_apply(f3, E2).allclose(vec(0, 2, 1))
    assert frame_operator_apply(f3, E1).allclose(vec(0, 0, 0))
    p = TwoFrame([vec(0, 1)], vec(1, 0))
    assert frame_operator_apply(p, vec(0, 1)).allclose(vec(0, 1))


def test_optimal_bounds(f3):
    assert optimal_bounds(f3) == pytest.approx((1, 3), abs=1e-12)
    assert optimal_bounds(TwoFrame([vec(0, 1)], vec(1, 0))) == pytest.approx((1, 1))
    with pytest.raises(NotAFrameError):
        optimal_bounds(TwoFrame([E2], E1))
    assert not is_frame(TwoFrame([E2], E1))


def test_verify_bounds(f3):
    assert verify_bounds(f3, 1, 3).passed
    assert verify_bounds(f3, 0.5, 10).passed
    v = verify_bounds(f3, 2, 3)
    assert not v.passed and not v.lower_ok and v.upper_ok
    w = v.witness.points()[0]
    w = w * np.exp(-1j * np.angle(w[2]))
    np.testing.assert_allclose(w, [0, -1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)
    assert v.witness_form == pytest.approx(1)
    v = verify_bounds(f3, 1, 2.5)
    assert not v.upper_ok and v.witness_form == pytest.approx(3)


def test_reconstruction(f3):
    assert reconstruct(f3, E2).allclose(E2, atol=1e-10)
    assert reconstruct(f3, E1).allclose(vec(0, 0, 0), atol=1e-12)
    np.testing.assert_allclose([c.data[0] for c in dual_coefficients(f3, E2)], [2 / 3, -1 / 3, 1 / 3])


def test_dependent_vector_rejected():
    with pytest.raises(InvalidOperandError):
        TwoFrame([E2, E1 * 2], E1)


def test_bad_claim_rejected():
    with pytest.raises(InvalidOperandError):
        TwoFrame([E2, E3], E1, claimed_bounds=(2, 1))


def test_from_module_frame():
    e1, e2 = vec(1, 0), vec(0, 1)
    f = from_module_frame(ModuleFrame((e1, e2), (1, 1)), e1)
    assert f.claimed_bounds == pytest.approx((1, 1))
    assert optimal_bounds(f) == pytest.approx((1, 1))
    with pytest.raises(NotInvertibleError):
        from_module_frame(ModuleFrame((e1, e2)), vec(0, 0))


def test_restrict_to_complement(f3):
    mf = restrict_to_complement_frame(f3)
    assert mf.claimed_bounds == pytest.approx((1, 3))
    for v, w in zip(mf.vectors, f3.vectors):
        assert v.allclose(w)
    g = TwoFrame(f3.vectors, E1 * 2)
    mg = restrict_to_complement_frame(g)
    assert optimal_bounds(g) == pytest.approx((4, 12))
    assert mg.claimed_bounds == pytest.approx((1, 3))


def test_mixed_associate():
    vectors = [E2, E3, E2 + E3]
    assert mixed_associate_check(vectors, E1, E2, E3)
    assert mixed_associate_check(vectors, E1, E2, vec(0, 0, 0))
    with pytest.raises(DegenerateInputError):
        mixed_associate_check(vectors, E1, E1 * 2, E3)


def test_tightness_from_reconstruction():
    assert tightness_from_reconstruction([E2, E3], E1)
    assert not tightness_from_reconstruction([E2, E3, E2 + E3], E1)
    assert not tightness_from_reconstruction([], E1)


def test_operator_norms(f3):
    assert synthesis_operator_norm(f3) == pytest.approx(math.sqrt(3))
    assert frame_operator_norm(f3) == pytest.approx(3)


def frames(draw_kind="random"):
    return st.builds(
        lambda seed, n, m, extra: random_frame(diagonal(n), m, m - 1 + extra, np.random.default_rng(seed),
                                               kind=draw_kind),
        st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(2, 5), st.integers(0, 3),
    )


@given(frames(), st.integers(0, 2**32 - 1))
def test_reconstruction_property(f, seed):
    x = random_vector(f.algebra, f.rank, np.random.default_rng(seed))
    assert vector_norm(reconstruct(f, x) - project(x, f.quotient)) <= 1e-8 * vector_norm(x)


@given(frames("parseval"))
def test_parseval_instances(f):
    assert frame_bounds(f) == pytest.approx((1, 1), abs=1e-10)
    assert tightness_from_reconstruction(f.vectors, f.associate)


@given(frames())
@settings(max_examples=25)
def test_bounds_invariants(f):
    a, b = optimal_bounds(f)
    assert verify_bounds(f, a, b).passed
    assert synthesis_operator_norm(f) <= math.sqrt(b) + 1e-9
    assert frame_operator_norm(f) <= b + 1e-9
    if a > 0.1:
        v = verify_bounds(f, a * (1 + 1e-8) + 1e-8, b, 1e-9)
        assert not v.passed and v.witness is not None


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25)
def test_module_frame_conversion_contains_optimal(seed):
    rng = np.random.default_rng(seed)
    vectors = tuple(random_vector(diagonal(2), 3, rng) for _ in range(4))
    xi = random_vector(diagonal(2), 3, rng)
    mf = ModuleFrame(vectors)
    if module_frame_bounds(mf)[0] <= 1e-6:
        return
    lo, hi = from_module_frame(mf, xi).claimed_bounds
    a, b = frame_bounds(TwoFrame(vectors, xi, check_independence=False))
    assert lo <= a + 1e-9 * hi and b <= hi * (1 + 1e-9)


def test_restriction_raises_on_non_frame():
    with pytest.raises(FramelabError):
        restrict_to_complement_frame(TwoFrame([E2], E1))
