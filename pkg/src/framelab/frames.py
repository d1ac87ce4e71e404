"""A-2-frames over diagonal algebras.

Over ``diagonal(n)`` the frame inequality

    A <x, x | xi>  <=  sum_i <x, x_i | xi> <x_i, x | xi>  <=  B <x, x | xi>

holds in the algebra order exactly when it holds at every point, so a frame
over ``diagonal(n)`` is ``n`` independent scalar frame problems on the
complements of ``xi(t)``.  All matrices below are per point, in complement
coordinates ``x = U_t c``:

* synthesis ``V_t = U_t^H [x_1 ... x_N]``            (d x N)
* analysis ``V_t^H G_t``                              (N x d)
* frame operator ``F_t = V_t V_t^H G_t``              (d x d)
* quadratic form ``K_t = G_t V_t V_t^H G_t`` against the Gram ``G_t`` of
  ``<., .>_xi``; the optimal bounds are the extreme generalized
  eigenvalues of ``(K_t, G_t)`` over all points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from . import algebra as alg
from .algebra import AlgebraElement
from .errors import (
    DegenerateInputError,
    FramelabError,
    InvalidOperandError,
    NotAFrameError,
    UnsupportedAlgebraError,
)
from .module import (
    ModuleFrame,
    ModuleVector,
    a_combination,
    inner,
    is_a_independent,
    module_frame_bounds,
    pointwise_rank_deficient,
    pointwise_stack,
    vector_norm,
    zero_vector,
)
from .quotient import STANDARD, AssociateForm, QuotientSpace, build_quotient, project, range_quotient
from .two_inner import two_inner

DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TwoFrame:
    """Finite family ``{x_i}`` taken relative to an associate ``xi``.

    With ``check_independence`` each ``x_i`` must be A-independent of ``xi``
    (pairwise reading).  ``form`` defaults to the standard 2-inner product
    with ``xi`` in the third slot.
    """

    vectors: tuple
    associate: ModuleVector
    claimed_bounds: Optional[tuple[float, float]] = None
    form: Optional[AssociateForm] = None
    check_independence: bool = True
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        vectors = tuple(self.vectors)
        object.__setattr__(self, "vectors", vectors)
        xi = self.associate
        if not xi.algebra.is_commutative:
            raise UnsupportedAlgebraError("A-2-frames are built over commutative (diagonal) algebras")
        for v in vectors:
            xi._check(v)
        if self.form is None:
            object.__setattr__(self, "form", AssociateForm.standard(xi))
        if self.claimed_bounds is not None:
            a, b = (float(v) for v in self.claimed_bounds)
            if not 0 < a <= b:
                raise InvalidOperandError(f"frame bounds must satisfy 0 < A <= B, got ({a}, {b})")
            object.__setattr__(self, "claimed_bounds", (a, b))
        if self.check_independence and vectors:
            bad = dependent_on_associate(vectors, xi, self.tol)
            if bad:
                raise InvalidOperandError(f"frame vectors {bad} are not A-independent of the associate")

    def __len__(self):
        return len(self.vectors)

    @property
    def algebra(self):
        return self.associate.algebra

    @property
    def rank(self):
        return self.associate.rank

    @cached_property
    def quotient(self) -> QuotientSpace:
        if self.form.kind == STANDARD:
            return build_quotient(self.associate, self.tol)
        return range_quotient(self.form, self.tol)

    @cached_property
    def operators(self) -> "FrameOperators":
        return frame_operators(self)

    def with_bounds(self, bounds) -> "TwoFrame":
        return TwoFrame(self.vectors, self.associate, bounds, self.form, False, self.tol)


def dependent_on_associate(vectors: Sequence[ModuleVector], xi: ModuleVector, tol=DEFAULT_TOL) -> list[int]:
    """Indices ``i`` for which ``{x_i, xi}`` is A-dependent."""
    xp = xi.points()
    bad = []
    for i, v in enumerate(vectors):
        stack = np.stack([v.points(), xp], axis=-1)
        if np.any(pointwise_rank_deficient(stack, tol)):
            bad.append(i)
    return bad


@dataclass(frozen=True, eq=False)
class FrameOperators:
    quotient: QuotientSpace
    synthesis_matrix: np.ndarray
    analysis_matrix: np.ndarray
    frame_matrix: np.ndarray
    form_matrix: np.ndarray

    @property
    def gram(self) -> np.ndarray:
        return self.quotient.gram_xi


def frame_operators(f: TwoFrame) -> FrameOperators:
    q = f.quotient
    n, _, d = q.basis.shape
    if f.vectors:
        V = np.einsum("tmd,tmk->tdk", q.basis.conj(), pointwise_stack(f.vectors))
    else:
        V = np.zeros((n, d, 0), dtype=complex)
    G = q.gram_xi
    Vh = V.conj().transpose(0, 2, 1)
    analysis_m = Vh @ G
    frame_m = V @ analysis_m
    K = G @ V @ Vh @ G
    K = 0.5 * (K + K.conj().transpose(0, 2, 1))
    for arr in (V, analysis_m, frame_m, K):
        arr.setflags(write=False)
    return FrameOperators(q, V, analysis_m, frame_m, K)


# -- the three operators ---------------------------------------------------

def analysis(f: TwoFrame, x: ModuleVector) -> list[AlgebraElement]:
    """``T* x = (<x, x_i | xi>)_i``."""
    f.associate._check(x)
    return [f.form.evaluate(x, v) for v in f.vectors]


def synthesis(f: TwoFrame, coeffs: Sequence[AlgebraElement]) -> ModuleVector:
    """``T c = sum_i c_i x_i``."""
    if len(coeffs) != len(f.vectors):
        raise InvalidOperandError(f"{len(coeffs)} coefficients for a frame of {len(f.vectors)} vectors")
    if not f.vectors:
        return zero_vector(f.algebra, f.rank)
    return a_combination(list(coeffs), list(f.vectors))


def frame_operator_apply(f: TwoFrame, x: ModuleVector) -> ModuleVector:
    """``S x = sum_i <x, x_i | xi> x_i``."""
    return synthesis(f, analysis(f, x))


# -- bounds ----------------------------------------------------------------

@dataclass(frozen=True)
class FrameSpectrum:
    """Generalized eigen-data of ``(K_t, G_t)`` at every point."""

    eigenvalues: np.ndarray   # (n, d), ascending per point
    eigenvectors: np.ndarray  # (n, d, d), columns in complement coordinates

    @property
    def lower(self) -> float:
        return float(self.eigenvalues[:, 0].min()) if self.eigenvalues.size else 0.0

    @property
    def upper(self) -> float:
        return float(self.eigenvalues[:, -1].max()) if self.eigenvalues.size else 0.0


def frame_spectrum(f: TwoFrame) -> FrameSpectrum:
    ops = f.operators
    vals, vecs = [], []
    for K, G in zip(ops.form_matrix, ops.gram):
        w, v = scipy.linalg.eigh(K, G)
        vals.append(w)
        vecs.append(v)
    return FrameSpectrum(np.array(vals), np.array(vecs))


def frame_bounds(f: TwoFrame) -> tuple[float, float]:
    """Optimal ``(A, B)`` without the frame test; ``A`` may be zero."""
    spec = frame_spectrum(f)
    return (spec.lower, spec.upper)


def is_frame(f: TwoFrame, tol: float = DEFAULT_TOL) -> bool:
    a, b = frame_bounds(f)
    return b > 0.0 and a > tol * b


def optimal_bounds(f: TwoFrame, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Tight frame bounds ``(A_opt, B_opt)``.

    Raises :class:`NotAFrameError` when ``A_opt <= tol * B_opt``.
    """
    a, b = frame_bounds(f)
    if not (b > 0.0 and a > tol * b):
        raise NotAFrameError(f"lower frame bound {a:.3e} vanishes (upper {b:.3e})", a, b)
    return (a, b)


@dataclass(frozen=True, eq=False)
class BoundsVerdict:
    passed: bool
    claimed: tuple[float, float]
    optimal: tuple[float, float]
    lower_ok: bool
    upper_ok: bool
    witness: Optional[ModuleVector] = None
    witness_point: Optional[int] = None
    witness_form: Optional[float] = None
    witness_norm: Optional[float] = None

    def __bool__(self):
        return self.passed


def _point_witness(f: TwoFrame, t: int, coords: np.ndarray) -> ModuleVector:
    q = f.quotient
    pts = np.zeros((q.basis.shape[0], f.rank), dtype=complex)
    pts[t] = q.basis[t] @ coords
    return ModuleVector.from_points(f.algebra, pts)


def verify_bounds(f: TwoFrame, A: float, B: float, tol: float = DEFAULT_TOL) -> BoundsVerdict:
    """Check a claimed pair against the optimal bounds.

    Passes iff ``A <= A_opt + tol`` and ``B_opt <= B + tol``.  On failure the
    witness is the generalized eigenvector at the offending point, embedded
    as a module vector supported on that point; ``witness_form`` and
    ``witness_norm`` are its quadratic form and ``<x, x | xi>`` there.
    """
    spec = frame_spectrum(f)
    a_opt, b_opt = spec.lower, spec.upper
    if not (b_opt > 0.0 and a_opt > DEFAULT_TOL * b_opt):
        raise NotAFrameError(f"lower frame bound {a_opt:.3e} vanishes (upper {b_opt:.3e})", a_opt, b_opt)
    lower_ok = A <= a_opt + tol
    upper_ok = b_opt <= B + tol
    verdict = dict(passed=lower_ok and upper_ok, claimed=(float(A), float(B)), optimal=(a_opt, b_opt),
                   lower_ok=lower_ok, upper_ok=upper_ok)
    if lower_ok and upper_ok:
        return BoundsVerdict(**verdict)
    if not lower_ok:
        t = int(np.argmin(spec.eigenvalues[:, 0]))
        c = spec.eigenvectors[t][:, 0]
    else:
        t = int(np.argmax(spec.eigenvalues[:, -1]))
        c = spec.eigenvectors[t][:, -1]
    G = f.operators.gram[t]
    c = c / np.sqrt((c.conj() @ G @ c).real)
    K = f.operators.form_matrix[t]
    witness = _point_witness(f, t, c)
    return BoundsVerdict(**verdict, witness=witness, witness_point=t,
                         witness_form=float((c.conj() @ K @ c).real),
                         witness_norm=float((c.conj() @ G @ c).real))


def frame_quadratic_form(f: TwoFrame, x: ModuleVector) -> AlgebraElement:
    """``sum_i <x, x_i | xi> <x_i, x | xi>``, evaluated directly."""
    total = alg.zero(f.algebra)
    for c in analysis(f, x):
        total = total + c * c.adjoint()
    return total


# -- reconstruction --------------------------------------------------------

def frame_inverse_apply(f: TwoFrame, x: ModuleVector, tol: float = DEFAULT_TOL) -> ModuleVector:
    """``S^{-1}`` applied to the class of ``x``, solved point by point."""
    optimal_bounds(f, tol)
    q = f.quotient
    c = q.coordinates(project(x, q))
    y = np.stack([np.linalg.solve(F, ct) for F, ct in zip(f.operators.frame_matrix, c)])
    return q.from_coordinates(y)


def reconstruct(f: TwoFrame, x: ModuleVector, tol: float = DEFAULT_TOL) -> ModuleVector:
    """``sum_i <S^{-1} x, x_i | xi> x_i``, returned as its complement representative.

    The result equals ``project(x)`` for any frame; ``x`` is only defined
    modulo ``L_xi``.
    """
    y = frame_inverse_apply(f, x, tol)
    return project(synthesis(f, analysis(f, y)), f.quotient)


def dual_coefficients(f: TwoFrame, x: ModuleVector, tol: float = DEFAULT_TOL) -> list[AlgebraElement]:
    """Canonical dual coefficients ``<S^{-1} x, x_i | xi>``."""
    return analysis(f, frame_inverse_apply(f, x, tol))


# -- operator norms in the <., .>_xi geometry --------------------------------

def _sqrtm_psd(G):
    w, v = np.linalg.eigh(G)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T, (v / np.sqrt(w)) @ v.conj().T


def synthesis_operator_norm(f: TwoFrame) -> float:
    """``max_t || G_t^{1/2} V_t ||_2``: the norm of ``T`` from l2 to the complement."""
    ops = f.operators
    best = 0.0
    for V, G in zip(ops.synthesis_matrix, ops.gram):
        if V.shape[1] == 0:
            continue
        half, _ = _sqrtm_psd(G)
        best = max(best, float(np.linalg.norm(half @ V, 2)))
    return best


def frame_operator_norm(f: TwoFrame) -> float:
    """``max_t || G_t^{1/2} F_t G_t^{-1/2} ||_2``."""
    ops = f.operators
    best = 0.0
    for F, G in zip(ops.frame_matrix, ops.gram):
        half, inv_half = _sqrtm_psd(G)
        best = max(best, float(np.linalg.norm(half @ F @ inv_half, 2)))
    return best


# -- module frames and A-2-frames -------------------------------------------

def from_module_frame(mf: ModuleFrame, xi: ModuleVector, tol: float = DEFAULT_TOL) -> TwoFrame:
    """A module frame with bounds ``(A, B)`` is an A-2-frame for ``xi``.

    Certified bounds: ``(A * lambda_min(<xi, xi>), ||B <xi, xi>||)``.  When
    ``mf`` carries no bounds its optimal module-frame bounds are used; carried
    bounds are checked against them first.
    """
    if not xi.algebra.is_commutative:
        raise UnsupportedAlgebraError("module frames convert only over commutative algebras")
    if not mf.vectors:
        raise NotAFrameError("empty module frame", 0.0, 0.0)
    xi._check(mf.vectors[0])
    xx = inner(xi, xi)
    alg.invert(xx, tol)
    a_mod, b_mod = module_frame_bounds(mf)
    if mf.claimed_bounds is None:
        if not a_mod > tol * b_mod:
            raise NotAFrameError("module family is not a frame", a_mod, b_mod)
        A, B = a_mod, b_mod
    else:
        A, B = mf.claimed_bounds
        if A > a_mod + tol or b_mod > B + tol:
            raise InvalidOperandError(
                f"claimed module-frame bounds ({A}, {B}) do not hold (optimal ({a_mod}, {b_mod}))"
            )
    lam_min = float(alg.spectrum(xx)[0])
    lower = A * lam_min
    upper = alg.norm(xx * B)
    return TwoFrame(mf.vectors, xi, (lower, upper), check_independence=False, tol=tol)


def restrict_to_complement_frame(f: TwoFrame, tol: float = DEFAULT_TOL) -> ModuleFrame:
    """Project the family onto ``L_xi^perp`` and return it as a module frame there.

    For ``x`` orthogonal to ``xi``, ``<x, y | xi> = <xi, xi> <x, y>``, so an
    A-2-frame with bounds ``(A, B)`` gives module-frame bounds
    ``(A / max <xi,xi>, B / min <xi,xi>)`` on the complement.  The derived
    bounds are checked against the optimal module-frame bounds of the
    projected family before returning.
    """
    if f.form.kind != STANDARD:
        raise UnsupportedAlgebraError("restriction is defined for the standard 2-inner product")
    a_opt, b_opt = optimal_bounds(f, tol)
    q = f.quotient
    g = alg.spectrum(inner(f.associate, f.associate))
    lower, upper = a_opt / g[-1], b_opt / g[0]
    projected = tuple(project(v, q) for v in f.vectors)
    mf = ModuleFrame(projected, (lower, upper))
    a_mod, b_mod = module_frame_bounds(mf, basis=q.basis)
    scale = max(1.0, upper)
    if a_mod < lower - tol * scale or b_mod > upper + tol * scale:
        raise FramelabError(
            f"module-frame bounds ({a_mod}, {b_mod}) escape the derived ({lower}, {upper})"
        )
    return mf


def mixed_associate_residual(vectors: Sequence[ModuleVector], xi: ModuleVector, eta: ModuleVector,
                             x: ModuleVector, tol: float = DEFAULT_TOL) -> float:
    """``||<S_eta x, x | xi> - <S_xi x, x | eta>*||`` with ``x`` projected off ``xi`` and ``eta``."""
    if not is_a_independent([xi, eta], tol):
        raise DegenerateInputError("the two associates are A-dependent")
    x = _project_off_pair(x, xi, eta)
    s_xi = _raw_frame_apply(vectors, xi, x)
    s_eta = _raw_frame_apply(vectors, eta, x)
    lhs = two_inner(s_eta, x, xi)
    rhs = two_inner(s_xi, x, eta).adjoint()
    return alg.norm(lhs - rhs)


def mixed_associate_check(vectors, xi, eta, x, tol: float = DEFAULT_TOL) -> bool:
    return mixed_associate_residual(vectors, xi, eta, x, tol) <= tol


def _raw_frame_apply(vectors, xi, x):
    total = zero_vector(x.algebra, x.rank)
    for v in vectors:
        total = total + a_combination([two_inner(x, v, xi)], [v])
    return total


def _project_off_pair(x, xi, eta):
    """Orthogonal projection of ``x(t)`` onto ``span{xi(t), eta(t)}^perp``."""
    pair = np.stack([xi.points(), eta.points()], axis=-1)
    q, _ = np.linalg.qr(pair)
    pts = x.points()
    pts = pts - np.einsum("tmk,tk->tm", q, np.einsum("tmk,tm->tk", q.conj(), pts))
    return ModuleVector.from_points(x.algebra, pts)


def reconstruction_identity_residual(vectors: Sequence[ModuleVector], form: AssociateForm,
                                     quotient: QuotientSpace, test_vectors=None) -> float:
    """Worst ``|| [sum_i <b, x_i>_xi x_i] - b ||`` over test vectors (default: complement basis).

    Both sides are compared as complement representatives.
    """
    basis = quotient.complement_basis if test_vectors is None else test_vectors
    worst = 0.0
    for b in basis:
        b = project(b, quotient)
        if vectors:
            s = a_combination([form.evaluate(b, v) for v in vectors], list(vectors))
        else:
            s = zero_vector(b.algebra, b.rank)
        worst = max(worst, vector_norm(project(s, quotient) - b))
    return worst


def tightness_from_reconstruction(vectors: Sequence[ModuleVector], xi: ModuleVector,
                                  tol: float = 1e-9) -> bool:
    """If ``x = sum_i <x, x_i | xi> x_i`` on the complement, the family is Parseval.

    Returns ``False`` when the reconstruction hypothesis fails; when it
    holds, the optimal bounds are computed and must equal ``(1, 1)``.
    """
    q = build_quotient(xi)
    if reconstruction_identity_residual(vectors, q.form, q) > tol:
        return False
    f = TwoFrame(tuple(vectors), xi, check_independence=False)
    a, b = frame_bounds(f)
    if abs(a - 1.0) > tol or abs(b - 1.0) > tol:
        raise FramelabError(f"reconstruction identity holds but bounds are ({a}, {b})")
    return True
