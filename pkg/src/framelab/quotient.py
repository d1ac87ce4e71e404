"""The quotient ``E_xi``: what ``<., . | xi>`` still sees once ``L_xi`` is killed.

Everything here works over a diagonal algebra and is computed point by point.
A semi-inner form is a stack of Hermitian PSD matrices ``H_t`` with
``<x, y>_xi (t) = y(t)^H H_t x(t)``.  Its null space at each point is the part
of ``C^m`` the form cannot see; the quotient is realized as the orthogonal
complement of that null space (the range of ``H_t``).

For the standard form the null space is ``span xi(t)``, so the complement is
``xi(t)^perp`` and the projection is ``x - <x,xi><xi,xi>^{-1} xi``.  The
tensor form of two associates has a larger null space; see
:mod:`framelab.tensor`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import algebra as alg
from .algebra import AlgebraElement
from .errors import InvalidOperandError, NotInvertibleError, UnsupportedAlgebraError
from .module import ModuleVector, inner, module_action
from .two_inner import standard_form, two_inner

DEFAULT_TOL = 1e-10

STANDARD = "standard"
TENSOR = "tensor"


@dataclass(frozen=True, eq=False)
class AssociateForm:
    """The semi-inner product ``<x, y>_xi`` attached to an associate vector.

    ``kind`` is ``"standard"`` (``<x, y | xi>`` from the standard
    construction) or ``"tensor"`` (the product form of two associates,
    ``factors`` holding the pair).
    """

    associate: ModuleVector
    matrices: np.ndarray
    kind: str = STANDARD
    factors: Optional[tuple] = None

    @classmethod
    def standard(cls, xi: ModuleVector) -> "AssociateForm":
        return cls(xi, standard_form(xi), STANDARD)

    @property
    def algebra(self):
        return self.associate.algebra

    @property
    def rank(self):
        return self.associate.rank

    def evaluate(self, x: ModuleVector, y: ModuleVector) -> AlgebraElement:
        if self.kind == STANDARD:
            return two_inner(x, y, self.associate)
        self.associate._check(x)
        self.associate._check(y)
        val = np.einsum("tj,tjk,tk->t", y.points().conj(), self.matrices, x.points())
        return AlgebraElement._wrap(self.algebra, val)


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """Orthogonal realization of ``E_xi`` over a diagonal algebra.

    ``basis`` has shape ``(n, m, d)`` with orthonormal columns spanning the
    complement at each point; ``gram_xi`` has shape ``(n, d, d)`` and holds
    ``<b_j, b_i>_xi`` (row ``i``, column ``j``) so that
    ``<U c, U c'>_xi = c'^H G c``.
    """

    form: AssociateForm
    basis: np.ndarray
    gram_xi: np.ndarray
    projector: np.ndarray = field(repr=False)

    @property
    def associate(self) -> ModuleVector:
        return self.form.associate

    @property
    def dim(self) -> int:
        return self.basis.shape[2]

    @property
    def complement_basis(self) -> tuple[ModuleVector, ...]:
        alg_ = self.form.algebra
        return tuple(ModuleVector.from_points(alg_, self.basis[:, :, k]) for k in range(self.dim))

    def coordinates(self, x: ModuleVector) -> np.ndarray:
        """Complement coordinates ``U_t^H x(t)``, shape ``(n, d)``."""
        self.associate._check(x)
        return np.einsum("tmd,tm->td", self.basis.conj(), x.points())

    def from_coordinates(self, coords) -> ModuleVector:
        coords = np.asarray(coords, dtype=complex)
        return ModuleVector.from_points(self.form.algebra, np.einsum("tmd,td->tm", self.basis, coords))

    def semi_inner(self, x: ModuleVector, y: ModuleVector) -> AlgebraElement:
        return self.form.evaluate(x, y)


def _check_commutative(xi):
    if not xi.algebra.is_commutative:
        raise UnsupportedAlgebraError("quotients are built over commutative (diagonal) algebras only")


def pivot_complement(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``v^perp`` in ``C^m`` by a fixed rule.

    Pivot on the largest coordinate of ``v``, complete ``v`` with the other
    standard basis vectors in index order, then QR with the signs fixed so
    that ``R`` has a positive diagonal.  Returns ``(m, m-1)``.
    """
    m = v.shape[0]
    p = int(np.argmax(np.abs(v)))
    cols = [v] + [np.eye(m)[:, j] for j in range(m) if j != p]
    q, r = np.linalg.qr(np.stack(cols, axis=1))
    signs = np.sign(np.diag(r).real)
    signs[signs == 0] = 1.0
    q = q * signs
    return q[:, 1:]


def build_quotient(xi: ModuleVector, tol: float = DEFAULT_TOL) -> QuotientSpace:
    """Quotient by ``L_xi`` for the standard 2-inner product.

    Raises :class:`NotInvertibleError` when ``<xi, xi>`` has a (near) zero.
    """
    _check_commutative(xi)
    alg.invert(inner(xi, xi), tol)
    form = AssociateForm.standard(xi)
    pts = xi.points()
    basis = np.stack([pivot_complement(v) for v in pts])
    return _assemble(form, basis)


def range_quotient(form: AssociateForm, tol: float = DEFAULT_TOL) -> QuotientSpace:
    """Quotient for an arbitrary pointwise form: complement = range of ``H_t``.

    The range is read off the eigendecomposition of each ``H_t``; eigenvalues
    at or below ``tol`` times the largest count as null.  All points must have
    the same range dimension.
    """
    if not form.algebra.is_commutative:
        raise UnsupportedAlgebraError("quotients are built over commutative (diagonal) algebras only")
    bases = []
    for h in form.matrices:
        w, v = np.linalg.eigh(h)
        top = w[-1] if w.size else 0.0
        if top <= 0.0:
            raise NotInvertibleError("the semi-inner form vanishes at some point")
        keep = w > tol * top
        bases.append(v[:, keep][:, ::-1])
    dims = {b.shape[1] for b in bases}
    if len(dims) != 1:
        raise InvalidOperandError(f"complement dimension varies across points: {sorted(dims)}")
    return _assemble(form, np.stack(bases))


def _assemble(form, basis):
    uh = basis.conj().transpose(0, 2, 1)
    # G[i, j] = <b_j, b_i>_xi = b_i^H H b_j
    gram = uh @ form.matrices @ basis
    gram = 0.5 * (gram + gram.conj().transpose(0, 2, 1))
    projector = basis @ uh
    for arr in (basis, gram, projector):
        arr.setflags(write=False)
    return QuotientSpace(form, basis, gram, projector)


def project(x: ModuleVector, q: QuotientSpace) -> ModuleVector:
    """Canonical representative of ``x`` in the complement.

    Standard quotients use ``x - <x, xi><xi, xi>^{-1} xi``; other forms
    project orthogonally onto the range of the form.
    """
    if q.form.kind == STANDARD:
        xi = q.associate
        coeff = inner(x, xi) * alg.invert(inner(xi, xi))
        return x - module_action(coeff, xi)
    q.associate._check(x)
    return ModuleVector.from_points(q.form.algebra, np.einsum("tab,tb->ta", q.projector, x.points()))
