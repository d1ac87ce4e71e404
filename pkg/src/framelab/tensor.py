"""Tensor products of modules, 2-inner products and A-2-frames.

``x (x) y`` lives in the flattened module of rank ``m * m'`` over
``A (x) B``; coordinate ``(j, l)`` sits at index ``j * m' + l`` and algebra
point ``(t, s)`` at ``t * n' + s`` (row-major throughout).

The 2-inner product attached to ``xi (x) eta`` is fixed on simple tensors by

    <x1 (x) y1, x2 (x) y2 | xi (x) eta> = <x1, x2 | xi> (x) <y1, y2 | eta>

and extended sesquilinearly.  Pointwise this is the form ``H_xi (x) H_eta``,
whose null space contains ``xi (x) F`` and ``E (x) eta``: it is NOT the
standard construction applied to the vector ``xi (x) eta`` in the flattened
module.  Its quotient is computed from the flattened form directly; it
coincides with the tensor of the factor complements, which the checks here
verify rather than assume.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import algebra as alg
from .algebra import AlgebraElement, tensor_descriptor
from .errors import DegenerateInputError, InvalidOperandError, UnsupportedAlgebraError
from .frames import (
    TwoFrame,
    analysis,
    frame_bounds,
    frame_quadratic_form,
    frame_spectrum,
    optimal_bounds,
    reconstruction_identity_residual,
    verify_bounds,
)
from .module import ModuleVector, random_vector
from .quotient import TENSOR, AssociateForm, pivot_complement, project
from .two_inner import two_inner

DEFAULT_TOL = 1e-9


def tensor_vector(x: ModuleVector, y: ModuleVector) -> ModuleVector:
    """``x (x) y``: all pairwise algebra tensors of coordinates, row-major."""
    desc = tensor_descriptor(x.algebra, y.algebra)
    if x.algebra.is_commutative and y.algebra.is_commutative:
        m, n = x.data.shape
        mm, nn = y.data.shape
        data = np.einsum("ja,lb->jlab", x.data, y.data).reshape(m * mm, n * nn)
        return ModuleVector._wrap(desc, data)
    coords = [alg.tensor(a, b) for a in x.coords for b in y.coords]
    return ModuleVector(desc, np.stack([c.data for c in coords]))


def tensor_form(xi: ModuleVector, eta: ModuleVector) -> AssociateForm:
    """The product semi-inner form attached to ``xi (x) eta``."""
    if not (xi.algebra.is_commutative and eta.algebra.is_commutative):
        raise UnsupportedAlgebraError("tensor 2-inner products need commutative factors")
    h1 = AssociateForm.standard(xi).matrices
    h2 = AssociateForm.standard(eta).matrices
    n, m, _ = h1.shape
    nn, mm, _ = h2.shape
    H = np.einsum("tab,scd->tsacbd", h1, h2).reshape(n * nn, m * mm, m * mm)
    H.setflags(write=False)
    return AssociateForm(tensor_vector(xi, eta), H, TENSOR, (xi, eta))


def tensor_two_inner(X: ModuleVector, Y: ModuleVector, xi: ModuleVector, eta: ModuleVector) -> AlgebraElement:
    """``<X, Y | xi (x) eta>`` evaluated directly in the flattened module."""
    return tensor_form(xi, eta).evaluate(X, Y)


def tensor_two_inner_expanded(xs: Sequence[tuple], ys: Sequence[tuple], xi, eta) -> AlgebraElement:
    """Same pairing for ``X = sum_k u_k (x) v_k`` and ``Y = sum_l u'_l (x) v'_l``.

    Expands by sesquilinearity into factor 2-inner products.
    """
    total = None
    for u, v in xs:
        for u2, v2 in ys:
            term = alg.tensor(two_inner(u, u2, xi), two_inner(v, v2, eta))
            total = term if total is None else total + term
    return total


@dataclass(frozen=True, eq=False)
class TensorFrame:
    left: TwoFrame
    right: TwoFrame
    product: TwoFrame
    certified_bounds: Optional[tuple[float, float]] = None

    @property
    def product_vectors(self) -> tuple:
        return self.product.vectors

    @property
    def associate(self) -> ModuleVector:
        return self.product.associate

    def index(self, i: int, j: int) -> int:
        return i * len(self.right) + j


def tensor_family(left: TwoFrame, right: TwoFrame, bounds=None) -> TensorFrame:
    """All ``x_i (x) y_j`` with associate ``xi (x) eta``; no bound checks."""
    if left.form.kind != "standard" or right.form.kind != "standard":
        raise InvalidOperandError("tensor factors must use the standard 2-inner product")
    vectors = tuple(tensor_vector(x, y) for x in left.vectors for y in right.vectors)
    form = tensor_form(left.associate, right.associate)
    product = TwoFrame(vectors, form.associate, bounds, form, check_independence=bool(vectors),
                       tol=min(left.tol, right.tol))
    return TensorFrame(left, right, product, bounds)


def _verified_bounds(f: TwoFrame, tol):
    if f.claimed_bounds is None:
        return optimal_bounds(f)
    verdict = verify_bounds(f, *f.claimed_bounds, tol=tol)
    if not verdict:
        raise InvalidOperandError(
            f"claimed bounds {f.claimed_bounds} fail (optimal {verdict.optimal})"
        )
    return f.claimed_bounds


def tensor_frame(left: TwoFrame, right: TwoFrame, tol: float = DEFAULT_TOL) -> TensorFrame:
    """Product frame with certified bounds ``(A C, B D)``.

    Each factor contributes its claimed bounds (verified first) or, when it
    carries none, its optimal bounds.  Raises
    :class:`~framelab.errors.NotAFrameError` if a factor is not a frame.
    """
    a, b = _verified_bounds(left, tol)
    c, d = _verified_bounds(right, tol)
    return tensor_family(left, right, (a * c, b * d))


def is_tight(f: TwoFrame, tol: float = DEFAULT_TOL) -> bool:
    a, b = frame_bounds(f)
    return b > 0 and abs(b - a) <= tol * max(1.0, b)


def is_parseval(f: TwoFrame, tol: float = DEFAULT_TOL) -> bool:
    a, b = frame_bounds(f)
    return abs(a - 1.0) <= tol and abs(b - 1.0) <= tol


def _factor_basis(tf: TensorFrame) -> np.ndarray:
    """``kron(U_xi(t), U_eta(s))`` at every product point, shape ``(n n', m m', d d')``."""
    u1 = tf.left.quotient.basis
    u2 = tf.right.quotient.basis
    n, m, d = u1.shape
    nn, mm, dd = u2.shape
    return np.einsum("tad,sbe->tsabde", u1, u2).reshape(n * nn, m * mm, d * dd)


def factor_complement_embedding_residual(tf: TensorFrame) -> float:
    """How far the tensor of the factor complements is from the product complement.

    Zero when ``U_xi (x) U_eta`` lies in, and has the same dimension as, the
    complement built from the flattened form.
    """
    W = _factor_basis(tf)
    q = tf.product.quotient
    if W.shape[2] != q.dim:
        return float("inf")
    leak = W - q.projector @ W
    return float(np.max(np.linalg.norm(leak, axis=(1, 2)), initial=0.0))


def product_frame_matrix_in_factor_basis(tf: TensorFrame) -> np.ndarray:
    """``S_{xi (x) eta}`` expressed in the ``U_xi (x) U_eta`` coordinates."""
    q = tf.product.quotient
    F = tf.product.operators.frame_matrix
    R = q.basis @ F @ q.basis.conj().transpose(0, 2, 1)
    W = _factor_basis(tf)
    return W.conj().transpose(0, 2, 1) @ R @ W


def tensor_frame_operator_residual(left: TwoFrame, right: TwoFrame, samples: int = 8, seed: int = 0) -> float:
    """``|| S_{xi (x) eta} - S_xi (x) S_eta ||`` at every product point.

    The product operator comes from the sum over ``x_i (x) y_j``; the
    comparison is made on the matrices in factor-basis coordinates and, as a
    second route, on random simple tensors ``x (x) y``.
    """
    tf = tensor_family(left, right)
    M = product_frame_matrix_in_factor_basis(tf)
    F1 = left.operators.frame_matrix
    F2 = right.operators.frame_matrix
    n, d, _ = F1.shape
    nn, dd, _ = F2.shape
    K = np.einsum("tab,scd->tsacbd", F1, F2).reshape(n * nn, d * dd, d * dd)
    residual = float(np.max(np.linalg.norm(M - K, ord=2, axis=(1, 2)), initial=0.0))

    rng = np.random.default_rng(seed)
    q = tf.product.quotient
    for _ in range(samples):
        x = random_vector(left.algebra, left.rank, rng)
        y = random_vector(right.algebra, right.rank, rng)
        xy = tensor_vector(x, y)
        lhs = _apply(tf.product, xy)
        rhs = tensor_vector(_apply(left, x), _apply(right, y))
        diff = project(lhs, q) - project(rhs, q)
        residual = max(residual, float(np.max(np.abs(diff.data), initial=0.0)))
    return residual


def _apply(f: TwoFrame, x: ModuleVector) -> ModuleVector:
    coeffs = analysis(f, x)
    total = None
    for c, v in zip(coeffs, f.vectors):
        term = ModuleVector._wrap(v.algebra, c.data[None, :] * v.data)
        total = term if total is None else total + term
    return total


def tensor_frame_operator_check(left: TwoFrame, right: TwoFrame, tol: float = DEFAULT_TOL) -> bool:
    return tensor_frame_operator_residual(left, right) <= tol


def scalar_factor_restriction(tf: TensorFrame, x: ModuleVector, tol: float = DEFAULT_TOL,
                              bounds=None, samples: int = 32, seed: int = 0):
    """Recover frame bounds of the right factor from a product over ``C (x) B``.

    With witness ``x`` and product bounds ``(A, B)`` (default: the certified
    ones, else optimal) returns ``(A1, B1, verdict)`` where
    ``A1 = A <x,x|xi> / sum_i |<x,x_i|xi>|^2`` and likewise ``B1``; the
    verdict says whether ``{y_j}`` satisfies the frame inequality with
    ``(A1, B1)``, both exactly (spectrum) and on sampled ``y``.
    """
    left = tf.left
    if left.algebra.concrete != ("diagonal", 1):
        raise UnsupportedAlgebraError("the left factor must be over the scalars (diagonal(1))")
    left.associate._check(x)
    if bounds is None:
        bounds = tf.certified_bounds if tf.certified_bounds is not None else optimal_bounds(tf.product)
    A, B = bounds
    coeffs = analysis(left, x)
    denom = float(sum(abs(c.data[0]) ** 2 for c in coeffs))
    num = float(left.form.evaluate(x, x).data[0].real)
    if denom <= tol:
        raise DegenerateInputError(f"witness gives sum |<x, x_i | xi>|^2 = {denom:.3e}")
    A1 = A * num / denom
    B1 = B * num / denom

    right = tf.right
    a_r, b_r = frame_bounds(right)
    scale = max(1.0, B1)
    ok = a_r >= A1 - tol * scale and b_r <= B1 + tol * scale
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        y = random_vector(right.algebra, right.rank, rng)
        yy = right.form.evaluate(y, y)
        Q = frame_quadratic_form(right, y)
        step = tol * max(1.0, alg.norm(Q), B1 * alg.norm(yy))
        ok = ok and alg.leq(yy * A1, Q, step) and alg.leq(Q, yy * B1, step)
    return (A1, B1, bool(ok))


def tensor_tightness_from_reconstruction(tf: TensorFrame, tol: float = DEFAULT_TOL) -> bool:
    """If ``x (x) y = sum <x (x) y, x_i (x) y_j | xi (x) eta> x_i (x) y_j`` the product is Parseval.

    The identity is tested on the simple tensors of the factor complement
    bases.
    """
    if not tf.product.vectors:
        return False
    q = tf.product.quotient
    tests = [tensor_vector(b1, b2) for b1 in tf.left.quotient.complement_basis
             for b2 in tf.right.quotient.complement_basis]
    if reconstruction_identity_residual(tf.product.vectors, tf.product.form, q, tests) > tol:
        return False
    a, b = frame_bounds(tf.product)
    if abs(a - 1.0) > tol or abs(b - 1.0) > tol:
        raise AssertionError(f"reconstruction identity holds but product bounds are ({a}, {b})")
    return True


def tensor_order_compatible(a: AlgebraElement, b: AlgebraElement, p: AlgebraElement,
                            tol: float = 1e-10) -> bool:
    """``a <= b`` (Hermitian) and ``p >= 0`` imply ``a (x) p <= b (x) p``."""
    return alg.leq(alg.tensor(a, p), alg.tensor(b, p), tol)


def flattened_orthogonal_complement(tf: TensorFrame) -> np.ndarray:
    """Orthonormal basis of ``(xi (x) eta)(p)^perp`` at every product point.

    This is the complement of ``L_{xi (x) eta}`` for the module inner
    product; it is larger than the quotient complement, and the product form
    is degenerate on the difference.
    """
    pts = tf.associate.points()
    return np.stack([pivot_complement(v) for v in pts])


def tensor_check_report(left: TwoFrame, right: TwoFrame, tol: float = DEFAULT_TOL) -> dict:
    tf = tensor_frame(left, right, tol)
    spec = frame_spectrum(tf.product)
    lo, hi = tf.certified_bounds
    residual = tensor_frame_operator_residual(left, right)
    scale = max(1.0, hi)
    bounds_ok = spec.lower >= lo - tol * scale and spec.upper <= hi + tol * scale
    return {
        "bounds_certified": [lo, hi],
        "bounds_optimal": [spec.lower, spec.upper],
        "frame_operator_residual": residual,
        "pass": bool(bounds_ok and residual <= tol),
    }
