"""Free Hilbert modules ``A^m`` over the concrete algebras.

The inner product is A-linear in the FIRST slot::

    <x, y> = sum_j x_j y_j*,        <a x, b y> = a <x, y> b*

which is the convention under which the standard 2-inner product satisfies
its axioms.  A vector stores its coordinates as one array of shape
``(m,) + element_shape``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import algebra as alg
from .algebra import AlgebraDescriptor, AlgebraElement
from .errors import InvalidOperandError, UnsupportedAlgebraError

DEFAULT_TOL = 1e-10


class ModuleVector:
    __slots__ = ("algebra", "data")

    def __init__(self, algebra: AlgebraDescriptor, data):
        arr = np.array(data, dtype=complex)
        if arr.ndim < 1 or arr.shape[1:] != algebra.element_shape or arr.shape[0] < 1:
            raise InvalidOperandError(
                f"coordinate array of shape {arr.shape} does not fit rank-m vectors over {algebra}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleVector is immutable")

    @classmethod
    def _wrap(cls, algebra, arr):
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(obj, "algebra", algebra)
        object.__setattr__(obj, "data", arr)
        return obj

    @classmethod
    def from_coords(cls, coords: Sequence[AlgebraElement]) -> "ModuleVector":
        if not coords:
            raise InvalidOperandError("a module vector needs at least one coordinate")
        desc = coords[0].descriptor
        for c in coords:
            if not desc.compatible(c.descriptor):
                raise InvalidOperandError("coordinates over different algebras")
        return cls(desc, np.stack([c.data for c in coords]))

    @classmethod
    def from_points(cls, algebra: AlgebraDescriptor, points) -> "ModuleVector":
        """Build a vector over ``diagonal(n)`` from its values at the points.

        ``points`` has shape ``(n, m)``: row ``t`` is the vector in ``C^m``
        seen at point ``t``.
        """
        if not algebra.is_commutative:
            raise UnsupportedAlgebraError("point values only make sense over a diagonal algebra")
        pts = np.asarray(points, dtype=complex)
        return cls(algebra, pts.T.copy())

    @property
    def rank(self) -> int:
        return self.data.shape[0]

    @property
    def coords(self) -> tuple[AlgebraElement, ...]:
        return tuple(AlgebraElement._wrap(self.algebra, c.copy()) for c in self.data)

    def points(self) -> np.ndarray:
        """``(n, m)`` array of point values (diagonal algebras only)."""
        if not self.algebra.is_commutative:
            raise UnsupportedAlgebraError("point values only make sense over a diagonal algebra")
        return self.data.T

    def _check(self, other):
        if not isinstance(other, ModuleVector):
            raise InvalidOperandError(f"expected a ModuleVector, got {type(other).__name__}")
        if not self.algebra.compatible(other.algebra) or self.rank != other.rank:
            raise InvalidOperandError(
                f"shape mismatch: rank {self.rank} over {self.algebra} vs rank {other.rank} over {other.algebra}"
            )

    def __add__(self, other):
        self._check(other)
        return ModuleVector._wrap(self.algebra, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return ModuleVector._wrap(self.algebra, self.data - other.data)

    def __neg__(self):
        return ModuleVector._wrap(self.algebra, -self.data)

    def __mul__(self, alpha):
        if isinstance(alpha, (int, float, complex, np.number)):
            return ModuleVector._wrap(self.algebra, self.data * complex(alpha))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return self * (1.0 / alpha)

    def allclose(self, other, atol=1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.data, other.data, rtol=0.0, atol=atol))

    def __repr__(self):
        return f"ModuleVector({self.algebra}, rank={self.rank}, {self.data.tolist()!r})"


@dataclass(frozen=True, eq=False)
class ModuleFrame:
    """Finite frame for a Hilbert module in the sense of module frames.

    ``claimed_bounds`` are real scalars ``(A, B)`` with
    ``A <x,x> <= sum <x,x_i><x_i,x> <= B <x,x>``.
    """

    vectors: tuple
    claimed_bounds: Optional[tuple[float, float]] = None

    def __post_init__(self):
        vectors = tuple(self.vectors)
        object.__setattr__(self, "vectors", vectors)
        if vectors:
            first = vectors[0]
            for v in vectors[1:]:
                first._check(v)
        if self.claimed_bounds is not None:
            a, b = (float(v) for v in self.claimed_bounds)
            if not 0 < a <= b:
                raise InvalidOperandError(f"frame bounds must satisfy 0 < A <= B, got ({a}, {b})")
            object.__setattr__(self, "claimed_bounds", (a, b))


def zero_vector(algebra: AlgebraDescriptor, rank: int) -> ModuleVector:
    return ModuleVector._wrap(algebra, np.zeros((rank,) + algebra.element_shape, dtype=complex))


def basis_vector(algebra: AlgebraDescriptor, rank: int, index: int) -> ModuleVector:
    """``e_index`` (0-based): the unit of A in coordinate ``index``."""
    data = np.zeros((rank,) + algebra.element_shape, dtype=complex)
    data[index] = alg.unit(algebra).data
    return ModuleVector._wrap(algebra, data)


def random_vector(algebra: AlgebraDescriptor, rank: int, rng: np.random.Generator, scale=1.0) -> ModuleVector:
    shape = (rank,) + algebra.element_shape
    data = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (scale / np.sqrt(2.0))
    return ModuleVector._wrap(algebra, data)


def _inner_data(algebra, x, y):
    if algebra.is_commutative:
        return np.sum(x * y.conj(), axis=0)
    return np.einsum("jab,jcb->ac", x, y.conj())


def inner(x: ModuleVector, y: ModuleVector) -> AlgebraElement:
    """``<x, y> = sum_j x_j y_j*``."""
    x._check(y)
    return AlgebraElement._wrap(x.algebra, _inner_data(x.algebra, x.data, y.data))


def vector_norm(x: ModuleVector) -> float:
    """Hilbert-module norm ``sqrt(||<x, x>||)``."""
    return float(np.sqrt(alg.norm(inner(x, x))))


def module_action(a: AlgebraElement, x: ModuleVector) -> ModuleVector:
    """Left action ``a x``, coordinatewise."""
    if not a.descriptor.compatible(x.algebra):
        raise InvalidOperandError(f"descriptor mismatch: {a.descriptor} vs {x.algebra}")
    if x.algebra.is_commutative:
        return ModuleVector._wrap(x.algebra, a.data[None, :] * x.data)
    return ModuleVector._wrap(x.algebra, np.einsum("ab,jbc->jac", a.data, x.data))


def a_combination(coeffs: Sequence[AlgebraElement], vectors: Sequence[ModuleVector]) -> ModuleVector:
    """``sum_i a_i x_i``."""
    if len(coeffs) != len(vectors):
        raise InvalidOperandError(f"{len(coeffs)} coefficients for {len(vectors)} vectors")
    if not vectors:
        raise InvalidOperandError("empty A-combination has no defined shape")
    total = module_action(coeffs[0], vectors[0])
    for a, v in zip(coeffs[1:], vectors[1:]):
        total = total + module_action(a, v)
    return total


def pointwise_stack(vectors: Sequence[ModuleVector]) -> np.ndarray:
    """``(n, m, K)`` array: at point ``t`` the columns are the vectors' values."""
    if not vectors:
        raise InvalidOperandError("no vectors given")
    first = vectors[0]
    if not first.algebra.is_commutative:
        raise UnsupportedAlgebraError("pointwise views require a diagonal algebra")
    for v in vectors[1:]:
        first._check(v)
    return np.stack([v.data for v in vectors], axis=-1).transpose(1, 0, 2)


def pointwise_rank_deficient(stack: np.ndarray, tol: float) -> np.ndarray:
    """Boolean per point: the columns of ``stack[t]`` are linearly dependent.

    Dependence means ``sigma_min <= tol * sigma_max`` (or an all-zero block).
    """
    n, m, k = stack.shape
    if k == 0:
        return np.zeros(n, dtype=bool)
    if k > m:
        return np.ones(n, dtype=bool)
    sv = np.linalg.svd(stack, compute_uv=False)
    smax = sv[:, 0]
    smin = sv[:, -1]
    return (smax == 0.0) | (smin <= tol * smax)


def is_a_independent(vectors: Sequence[ModuleVector], tol: float = DEFAULT_TOL) -> bool:
    """A-independence over a diagonal algebra.

    A family is A-independent exactly when, at every point, its values are
    linearly independent in ``C^m``: a pointwise dependence supported at a
    single point is already a nonzero A-coefficient solution.
    """
    if not vectors:
        return True
    if not vectors[0].algebra.is_commutative:
        raise UnsupportedAlgebraError(
            "A-independence is only decided over commutative (diagonal) algebras"
        )
    return not bool(np.any(pointwise_rank_deficient(pointwise_stack(vectors), tol)))


def module_frame_bounds(mf: ModuleFrame, basis: Optional[np.ndarray] = None) -> tuple[float, float]:
    """Optimal module-frame bounds over a diagonal algebra.

    Pointwise the frame inequality reads ``A |c|^2 <= c^H W W^H c <= B |c|^2``.
    ``basis`` optionally restricts ``x`` to a submodule: an ``(n, m, d)``
    array with orthonormal columns at every point.
    """
    if not mf.vectors:
        return (0.0, 0.0)
    stack = pointwise_stack(mf.vectors)
    if basis is not None:
        stack = np.einsum("tmd,tmk->tdk", basis.conj(), stack)
    gram = stack @ stack.conj().transpose(0, 2, 1)
    eig = np.linalg.eigvalsh(gram)
    return (float(eig[:, 0].min()), float(eig[:, -1].max()))


# -- axiom checks for the module inner product ------------------------------

def check_module_axioms(algebra: AlgebraDescriptor, rank: int, trials: int, seed: int = 0,
                        tol: float = 1e-9) -> list[dict]:
    """Sample the pre-Hilbert module axioms I1-I5 on random data.

    I4 and I5 are taken with first-slot A-linearity:
    ``<a x, b y> = a <x, y> b*`` and
    ``<alpha x + beta y, z> = alpha <x, z> + beta <y, z>``.
    """
    rng = np.random.default_rng(seed)
    names = ("I1", "I2", "I3", "I4", "I5")
    worst = {k: 0.0 for k in names}
    witness = {k: None for k in names}

    def record(name, residual, wit):
        if residual > worst[name]:
            worst[name] = residual
        if residual > tol and witness[name] is None:
            witness[name] = wit

    for _ in range(trials):
        x = random_vector(algebra, rank, rng)
        y = random_vector(algebra, rank, rng)
        z = random_vector(algebra, rank, rng)
        a = alg.random_element(algebra, rng)
        b = alg.random_element(algebra, rng)
        alpha, beta = rng.standard_normal(2) + 1j * rng.standard_normal(2)

        xx = inner(x, x)
        record("I1", alg.positivity_residual(xx), {"x": x})
        record("I2", alg.norm(inner(x, y) - inner(y, x).adjoint()), {"x": x, "y": y})

        # I3: <0,0> = 0, and a vector supported on one point/entry is detected
        zero = zero_vector(algebra, rank)
        r3 = alg.norm(inner(zero, zero))
        e = np.zeros_like(x.data)
        idx = tuple(int(rng.integers(s)) for s in x.data.shape)
        e[idx] = 1.0
        spike = ModuleVector._wrap(algebra, e)
        # a single unit entry must give <spike, spike> of norm exactly 1
        r3 = max(r3, abs(alg.norm(inner(spike, spike)) - 1.0))
        # <x,x> = 0 forces x = 0: every ||x_j||^2 is dominated by ||<x,x>||
        big = max(alg.norm(c) for c in x.coords) ** 2
        r3 = max(r3, max(0.0, big - alg.norm(xx)))
        record("I3", r3, {"x": x})

        lhs = inner(module_action(a, x), module_action(b, y))
        rhs = a * inner(x, y) * b.adjoint()
        record("I4", alg.norm(lhs - rhs), {"x": x, "y": y, "a": a, "b": b})

        lhs = inner(x * alpha + y * beta, z)
        rhs = inner(x, z) * alpha + inner(y, z) * beta
        record("I5", alg.norm(lhs - rhs), {"x": x, "y": y, "z": z})

    return [
        {"axiom": k, "pass": worst[k] <= tol, "worst_residual": worst[k] if trials else None,
         "witness": witness[k]}
        for k in names
    ]
