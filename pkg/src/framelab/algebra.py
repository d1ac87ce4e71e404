"""Finite-dimensional C*-algebras: diagonal(n), matrix(k) and their tensors.

Elements are stored in a concrete representation:

* ``diagonal(n)`` -- a length-``n`` complex vector (functions on ``n`` points),
* ``matrix(k)`` -- a ``k x k`` complex matrix,
* ``tensor(A, B)`` -- the Kronecker representation.  A tensor of two
  commutative algebras is flattened row-major to ``diagonal(n*m)``; any
  other tensor is kept as a Kronecker matrix.

In finite dimension the spatial norm is the only C*-norm on ``A (x) B``, so
``norm(a (x) b) == norm(a) * norm(b)`` holds with no choice involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import InvalidOperandError, NotInvertibleError

DEFAULT_TOL = 1e-10

DIAGONAL = "diagonal"
MATRIX = "matrix"
TENSOR = "tensor"


@dataclass(frozen=True)
class AlgebraDescriptor:
    kind: str
    size: int = 0
    left: Optional["AlgebraDescriptor"] = None
    right: Optional["AlgebraDescriptor"] = None

    def __post_init__(self):
        if self.kind in (DIAGONAL, MATRIX):
            if int(self.size) < 1:
                raise InvalidOperandError(f"{self.kind} algebra needs a positive size")
        elif self.kind == TENSOR:
            if self.left is None or self.right is None:
                raise InvalidOperandError("tensor algebra needs two factors")
        else:
            raise InvalidOperandError(f"unknown algebra kind {self.kind!r}")

    @cached_property
    def concrete(self) -> tuple[str, int]:
        """``(kind, size)`` of the concrete algebra the elements live in."""
        if self.kind != TENSOR:
            return (self.kind, self.size)
        lk, ln = self.left.concrete
        rk, rn = self.right.concrete
        if lk == DIAGONAL and rk == DIAGONAL:
            return (DIAGONAL, ln * rn)
        return (MATRIX, ln * rn)

    @property
    def is_commutative(self) -> bool:
        return self.concrete[0] == DIAGONAL

    @property
    def dim(self) -> int:
        return self.concrete[1]

    @property
    def element_shape(self) -> tuple[int, ...]:
        kind, n = self.concrete
        return (n,) if kind == DIAGONAL else (n, n)

    def compatible(self, other: "AlgebraDescriptor") -> bool:
        return self is other or self.concrete == other.concrete

    def __str__(self):
        if self.kind == TENSOR:
            return f"tensor({self.left},{self.right})"
        return f"{self.kind}:{self.size}"


def diagonal(n: int) -> AlgebraDescriptor:
    return AlgebraDescriptor(DIAGONAL, int(n))


def matrix(k: int) -> AlgebraDescriptor:
    return AlgebraDescriptor(MATRIX, int(k))


def tensor_descriptor(left: AlgebraDescriptor, right: AlgebraDescriptor) -> AlgebraDescriptor:
    return AlgebraDescriptor(TENSOR, 0, left, right)


def parse_descriptor(text: str) -> AlgebraDescriptor:
    """Parse ``diagonal:4``, ``matrix:2`` or ``tensor(diagonal:2,matrix:2)``."""
    text = text.strip()
    if text.startswith("tensor(") and text.endswith(")"):
        inner = text[len("tensor("):-1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return tensor_descriptor(parse_descriptor(inner[:i]), parse_descriptor(inner[i + 1:]))
        raise InvalidOperandError(f"cannot parse algebra {text!r}")
    kind, sep, size = text.partition(":")
    if not sep or kind not in (DIAGONAL, MATRIX):
        raise InvalidOperandError(f"cannot parse algebra {text!r}")
    try:
        return AlgebraDescriptor(kind, int(size))
    except ValueError:
        raise InvalidOperandError(f"cannot parse algebra {text!r}") from None


class AlgebraElement:
    """Immutable element of a concrete finite-dimensional C*-algebra."""

    __slots__ = ("descriptor", "data")

    def __init__(self, descriptor: AlgebraDescriptor, data):
        arr = np.array(data, dtype=complex)
        if arr.shape != descriptor.element_shape:
            raise InvalidOperandError(
                f"data of shape {arr.shape} does not fit {descriptor} "
                f"(expected {descriptor.element_shape})"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "descriptor", descriptor)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @classmethod
    def _wrap(cls, descriptor, arr):
        # trusted constructor for internal results of the right shape
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(obj, "descriptor", descriptor)
        object.__setattr__(obj, "data", arr)
        return obj

    @property
    def is_diagonal(self) -> bool:
        return self.descriptor.is_commutative

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            raise InvalidOperandError(f"expected an AlgebraElement, got {type(other).__name__}")
        if not self.descriptor.compatible(other.descriptor):
            raise InvalidOperandError(f"descriptor mismatch: {self.descriptor} vs {other.descriptor}")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement._wrap(self.descriptor, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement._wrap(self.descriptor, self.data - other.data)

    def __neg__(self):
        return AlgebraElement._wrap(self.descriptor, -self.data)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            if self.is_diagonal:
                return AlgebraElement._wrap(self.descriptor, self.data * other.data)
            return AlgebraElement._wrap(self.descriptor, self.data @ other.data)
        if isinstance(other, (int, float, complex, np.number)):
            return AlgebraElement._wrap(self.descriptor, self.data * complex(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return AlgebraElement._wrap(self.descriptor, self.data * complex(other))
        return NotImplemented

    def adjoint(self) -> "AlgebraElement":
        if self.is_diagonal:
            return AlgebraElement._wrap(self.descriptor, self.data.conj())
        return AlgebraElement._wrap(self.descriptor, self.data.conj().T.copy())

    @property
    def H(self):
        return self.adjoint()

    def hermitian_part(self) -> "AlgebraElement":
        return (self + self.adjoint()) * 0.5

    def allclose(self, other, atol=1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.data, other.data, rtol=0.0, atol=atol))

    def __repr__(self):
        return f"AlgebraElement({self.descriptor}, {self.data.tolist()!r})"


def element(descriptor: AlgebraDescriptor, data) -> AlgebraElement:
    return AlgebraElement(descriptor, data)


def unit(descriptor: AlgebraDescriptor) -> AlgebraElement:
    kind, n = descriptor.concrete
    data = np.ones(n, dtype=complex) if kind == DIAGONAL else np.eye(n, dtype=complex)
    return AlgebraElement._wrap(descriptor, data)


def zero(descriptor: AlgebraDescriptor) -> AlgebraElement:
    return AlgebraElement._wrap(descriptor, np.zeros(descriptor.element_shape, dtype=complex))


def scalar(descriptor: AlgebraDescriptor, value: complex) -> AlgebraElement:
    """``value * e``."""
    return unit(descriptor) * complex(value)


def random_element(descriptor: AlgebraDescriptor, rng: np.random.Generator, scale=1.0) -> AlgebraElement:
    """Complex Gaussian element with unit-variance entries."""
    shape = descriptor.element_shape
    data = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (scale / np.sqrt(2.0))
    return AlgebraElement._wrap(descriptor, data)


def random_hermitian(descriptor: AlgebraDescriptor, rng: np.random.Generator) -> AlgebraElement:
    return random_element(descriptor, rng).hermitian_part()


def random_positive(descriptor: AlgebraDescriptor, rng: np.random.Generator) -> AlgebraElement:
    a = random_element(descriptor, rng)
    return a * a.adjoint()


def arith(a: AlgebraElement, b=None, op: str = "add") -> AlgebraElement:
    """Dispatch ``add``, ``mul``, ``scale`` (``b`` is a complex) or ``adjoint``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        if isinstance(b, AlgebraElement):
            raise InvalidOperandError("scale expects a complex scalar")
        return complex(b) * a
    if op == "adjoint":
        return a.adjoint()
    raise InvalidOperandError(f"unknown operation {op!r}")


def norm(a: AlgebraElement) -> float:
    """C*-norm: max modulus (diagonal) or largest singular value (matrix)."""
    if a.data.size == 0:
        return 0.0
    if a.is_diagonal:
        return float(np.max(np.abs(a.data)))
    return float(np.linalg.norm(a.data, 2))


def spectrum(a: AlgebraElement) -> np.ndarray:
    """Real spectrum of the Hermitian part of ``a``, sorted ascending."""
    if a.is_diagonal:
        return np.sort(a.data.real)
    return np.linalg.eigvalsh(0.5 * (a.data + a.data.conj().T))


def hermitian_defect(a: AlgebraElement) -> float:
    """``norm(a - a*)``."""
    if a.is_diagonal:
        return float(np.max(np.abs(2.0 * a.data.imag), initial=0.0))
    return float(np.linalg.norm(a.data - a.data.conj().T, 2))


def positivity_residual(a: AlgebraElement) -> float:
    """How far ``a`` is from the positive cone: 0 for positive elements.

    For diagonal elements this is the larger of the worst ``|imag|`` and the
    most negative real part; for matrices the Hermitian defect and the most
    negative eigenvalue of the Hermitian part.
    """
    if a.is_diagonal:
        imag = float(np.max(np.abs(a.data.imag), initial=0.0))
        neg = float(max(0.0, -np.min(a.data.real, initial=0.0)))
        return max(imag, neg)
    neg = float(max(0.0, -spectrum(a)[0]))
    return max(hermitian_defect(a), neg)


def is_positive(a: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    return positivity_residual(a) <= tol


def leq(a: AlgebraElement, b: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    """Operator order ``a <= b``, i.e. ``b - a`` is positive."""
    return is_positive(b - a, tol)


def invert(a: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    if a.is_diagonal:
        if np.any(np.abs(a.data) <= tol):
            raise NotInvertibleError(f"zero (within {tol}) in the spectrum of {a!r}")
        return AlgebraElement._wrap(a.descriptor, 1.0 / a.data)
    smin = np.linalg.svd(a.data, compute_uv=False)[-1]
    if smin <= tol:
        raise NotInvertibleError(f"smallest singular value {smin:.3e} <= {tol}")
    return AlgebraElement._wrap(a.descriptor, np.linalg.inv(a.data))


def _as_matrix(a: AlgebraElement) -> np.ndarray:
    return np.diag(a.data) if a.is_diagonal else a.data


def tensor(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Spatial tensor product in the Kronecker representation (row-major)."""
    desc = tensor_descriptor(a.descriptor, b.descriptor)
    if a.is_diagonal and b.is_diagonal:
        return AlgebraElement._wrap(desc, np.kron(a.data, b.data))
    return AlgebraElement._wrap(desc, np.kron(_as_matrix(a), _as_matrix(b)))
