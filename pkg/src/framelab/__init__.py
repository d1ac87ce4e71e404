"""Numerical toolkit for A-2-inner products and A-2-frames over finite-dimensional C*-algebras."""

__version__ = "0.1.0"

from .algebra import AlgebraDescriptor, AlgebraElement, diagonal, matrix, parse_descriptor  # noqa: E402
from .module import ModuleFrame, ModuleVector, basis_vector, inner  # noqa: E402
from .two_inner import TwoInnerSpace, check_axioms, two_inner, two_norm  # noqa: E402
from .quotient import AssociateForm, QuotientSpace, build_quotient, project  # noqa: E402
from .frames import (  # noqa: E402
    TwoFrame,
    frame_bounds,
    optimal_bounds,
    reconstruct,
    verify_bounds,
)
from .tensor import TensorFrame, tensor_frame, tensor_vector  # noqa: E402

__all__ = [
    "AlgebraDescriptor", "AlgebraElement", "diagonal", "matrix", "parse_descriptor",
    "ModuleFrame", "ModuleVector", "basis_vector", "inner",
    "TwoInnerSpace", "check_axioms", "two_inner", "two_norm",
    "AssociateForm", "QuotientSpace", "build_quotient", "project",
    "TwoFrame", "frame_bounds", "optimal_bounds", "reconstruct", "verify_bounds",
    "TensorFrame", "tensor_frame", "tensor_vector",
]
