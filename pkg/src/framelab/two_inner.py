"""The standard A-2-inner product and its A-2-norm.

For a module ``E`` over a commutative algebra the map

    <x, y | z> = <x, y><z, z> - <x, z><z, y>

is an A-2-inner product (axioms T1-T7).  Over ``diagonal(n)`` it is, point by
point, the Gram determinant pairing ``y^H (|z|^2 I - z z^H) x``.  The formula
is still evaluated for matrix algebras so the axiom checker can exhibit
counterexamples there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from .algebra import AlgebraDescriptor, AlgebraElement
from .errors import DegenerateInputError, InvalidOperandError, UnsupportedAlgebraError
from .module import (
    ModuleVector,
    inner,
    module_action,
    pointwise_rank_deficient,
    random_vector,
)

DEFAULT_TOL = 1e-9
AXIOMS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7")


@dataclass(frozen=True)
class TwoInnerSpace:
    algebra: AlgebraDescriptor
    rank: int

    def __post_init__(self):
        if self.rank < 2:
            raise InvalidOperandError("a 2-inner product space needs A-rank at least 2")

    @property
    def is_valid(self) -> bool:
        """The standard construction is an A-2-inner product only over commutative A."""
        return self.algebra.is_commutative

    def random_vector(self, rng) -> ModuleVector:
        return random_vector(self.algebra, self.rank, rng)

    def two_inner(self, x, y, z) -> AlgebraElement:
        return two_inner(x, y, z)

    def two_norm(self, x, z) -> float:
        return two_norm(x, z)


def two_inner(x: ModuleVector, y: ModuleVector, z: ModuleVector) -> AlgebraElement:
    x._check(y)
    x._check(z)
    return inner(x, y) * inner(z, z) - inner(x, z) * inner(z, y)


def two_norm(x: ModuleVector, z: ModuleVector) -> float:
    """``p(x, z) = sqrt(||<x, x | z>||)``."""
    return float(np.sqrt(alg.norm(two_inner(x, x, z))))


def standard_form(xi: ModuleVector) -> np.ndarray:
    """Pointwise matrices ``H_t`` with ``<x, y | xi>(t) = y(t)^H H_t x(t)``.

    ``H_t = |xi(t)|^2 I - xi(t) xi(t)^H``; shape ``(n, m, m)``.
    """
    if not xi.algebra.is_commutative:
        raise UnsupportedAlgebraError("pointwise forms require a diagonal algebra")
    pts = xi.points()
    g = np.sum(np.abs(pts) ** 2, axis=1)
    m = xi.rank
    return g[:, None, None] * np.eye(m) - pts[:, :, None] * pts[:, None, :].conj()


def cauchy_schwarz_gap(x: ModuleVector, y: ModuleVector, z: ModuleVector) -> AlgebraElement:
    """``<x,x|z><y,y|z> - <x,y|z><x,y|z>*``; positive for valid inputs."""
    if not x.algebra.is_commutative:
        raise UnsupportedAlgebraError("the Cauchy-Schwarz inequality needs a commutative algebra")
    xy = two_inner(x, y, z)
    return two_inner(x, x, z) * two_inner(y, y, z) - xy * xy.adjoint()


def _vectors_witness(**kw):
    return dict(kw)


def check_axioms(space: TwoInnerSpace, trials: int, seed: int = 0, tol: float = DEFAULT_TOL) -> list[dict]:
    """Sample-test T1-T7 for the standard construction on ``space``.

    Each entry of the returned list is
    ``{"axiom", "pass", "worst_residual", "witness"}``; the witness is the
    first failing sample (a dict of vectors/elements) or ``None``.
    T1 is exercised in both directions over diagonal algebras: multiples
    ``a y`` give zero, and on mixed vectors the zero pattern of
    ``<x, x | y>`` must coincide with pointwise colinearity.
    """
    rng = np.random.default_rng(seed)
    A = space.algebra
    m = space.rank
    worst = {k: 0.0 for k in AXIOMS}
    witness = {k: None for k in AXIOMS}

    def record(name, residual, wit):
        if not residual <= worst[name]:
            worst[name] = residual
        if not residual <= tol and witness[name] is None:
            witness[name] = wit

    for _ in range(trials):
        x = random_vector(A, m, rng)
        y = random_vector(A, m, rng)
        z = random_vector(A, m, rng)
        w = random_vector(A, m, rng)
        a = alg.random_element(A, rng)
        b = alg.random_element(A, rng)
        alpha = complex(rng.standard_normal(), rng.standard_normal())

        # T1, forward: <a y, a y | y> = 0
        ay = module_action(a, y)
        r1 = alg.norm(two_inner(ay, ay, y))
        if A.is_commutative:
            r1 = max(r1, _t1_pattern_residual(A, m, y, rng, tol))
        record("T1", r1, _vectors_witness(x=ay, y=y))

        xxy = two_inner(x, x, y)
        record("T2", alg.positivity_residual(xxy), _vectors_witness(x=x, y=y))
        record("T3", alg.norm(xxy - two_inner(y, y, x)), _vectors_witness(x=x, y=y))
        xyz = two_inner(x, y, z)
        record("T4", alg.norm(xyz - two_inner(y, x, z).adjoint()), _vectors_witness(x=x, y=y, z=z))
        lhs = two_inner(module_action(a, x), module_action(b, y), z)
        record("T5", alg.norm(lhs - a * xyz * b.adjoint()), _vectors_witness(x=x, y=y, z=z, a=a, b=b))
        lhs = two_inner(x, y * alpha, z)
        record("T6", alg.norm(lhs - xyz * alpha.conjugate()), _vectors_witness(x=x, y=y, z=z))
        lhs = two_inner(x + y, z, w)
        record("T7", alg.norm(lhs - two_inner(x, z, w) - two_inner(y, z, w)),
               _vectors_witness(x=x, y=y, z=z, w=w))

    return [
        {"axiom": k, "pass": bool(worst[k] <= tol), "worst_residual": worst[k] if trials else None,
         "witness": witness[k]}
        for k in AXIOMS
    ]


def _t1_pattern_residual(A, m, y, rng, tol):
    """Reverse direction of T1, point by point.

    Builds ``x = a y + b w`` with ``b`` vanishing on a random set of points;
    where ``x`` and ``y`` are colinear (rank oracle) ``<x,x|y>`` must vanish,
    and elsewhere it must not.  Returns ``inf`` on a pattern mismatch.
    """
    n = A.dim
    a = alg.random_element(A, rng)
    w = random_vector(A, m, rng)
    mask = rng.random(n) < 0.5
    bdata = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * mask
    b = AlgebraElement(A, bdata)
    x = module_action(a, y) + module_action(b, w)
    val = two_inner(x, x, y).data
    stack = np.stack([x.points(), y.points()], axis=-1)
    colinear = pointwise_rank_deficient(stack, tol)
    scale = np.sum(np.abs(x.points()) ** 2, axis=1) * np.sum(np.abs(y.points()) ** 2, axis=1)
    vanishes = np.abs(val) <= tol * np.maximum(scale, 1.0)
    if np.any(colinear != vanishes):
        return float("inf")
    return float(np.max(np.abs(val[colinear]), initial=0.0))


def sup_characterization_check(x: ModuleVector, y: ModuleVector, tol: float = DEFAULT_TOL,
                               samples: int = 32, seed: int = 0) -> bool:
    """``p(x, y) = sup {||<x, z | y>|| : p(z, y) = 1}``.

    The supremum is attained at ``z = x / p(x, y)``; random unit ``z`` must
    never exceed it.
    """
    return sup_characterization_residual(x, y, tol, samples, seed) <= tol


def sup_characterization_residual(x, y, tol=DEFAULT_TOL, samples=32, seed=0) -> float:
    p = two_norm(x, y)
    if p <= tol:
        raise DegenerateInputError(f"p(x, y) = {p:.3e} is not above the tolerance")
    z = x / p
    residual = max(abs(two_norm(z, y) - 1.0), abs(alg.norm(two_inner(x, z, y)) - p))
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        u = random_vector(x.algebra, x.rank, rng)
        pu = two_norm(u, y)
        if pu <= tol:
            continue
        u = u / pu
        residual = max(residual, alg.norm(two_inner(x, u, y)) - p)
    return float(residual)
