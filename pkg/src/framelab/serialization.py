"""JSON encodings for descriptors, elements, vectors, frames and reports.

* complex scalar: ``[re, im]`` (a bare number is accepted on input)
* diagonal element: list of complex scalars; matrix element: list of rows
* descriptor: ``{"kind": "diagonal", "n": 4}``, ``{"kind": "matrix", "k": 2}``,
  ``{"kind": "tensor", "left": ..., "right": ...}``; the strings
  ``"diagonal:4"`` etc. are accepted on input
* vector: ``{"algebra": descriptor, "rank": m, "coords": [element, ...]}``
* frame: ``{"associate": vector, "vectors": [...], "claimed_bounds": [A, B] | null}``
"""

from __future__ import annotations

import json
import math

import numpy as np

from .algebra import (
    DIAGONAL,
    MATRIX,
    TENSOR,
    AlgebraDescriptor,
    AlgebraElement,
    parse_descriptor,
    tensor_descriptor,
)
from .errors import InvalidOperandError
from .frames import BoundsVerdict, TwoFrame
from .module import ModuleVector


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise InvalidOperandError(f"not a complex scalar: {obj!r}")


def encode_descriptor(d: AlgebraDescriptor) -> dict:
    if d.kind == DIAGONAL:
        return {"kind": DIAGONAL, "n": d.size}
    if d.kind == MATRIX:
        return {"kind": MATRIX, "k": d.size}
    return {"kind": TENSOR, "left": encode_descriptor(d.left), "right": encode_descriptor(d.right)}


def decode_descriptor(obj) -> AlgebraDescriptor:
    if isinstance(obj, str):
        return parse_descriptor(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidOperandError(f"not an algebra descriptor: {obj!r}")
    kind = obj["kind"]
    if kind == DIAGONAL:
        return AlgebraDescriptor(DIAGONAL, int(obj["n"]))
    if kind == MATRIX:
        return AlgebraDescriptor(MATRIX, int(obj["k"]))
    if kind == TENSOR:
        return tensor_descriptor(decode_descriptor(obj["left"]), decode_descriptor(obj["right"]))
    raise InvalidOperandError(f"unknown algebra kind {kind!r}")


def _encode_array(arr):
    if arr.ndim == 0:
        return encode_complex(arr)
    return [_encode_array(a) for a in arr]


def _decode_array(obj, depth):
    if depth == 0:
        return decode_complex(obj)
    return [_decode_array(o, depth - 1) for o in obj]


def encode_element(a: AlgebraElement) -> list:
    return _encode_array(a.data)


def decode_element(descriptor: AlgebraDescriptor, obj) -> AlgebraElement:
    depth = len(descriptor.element_shape)
    try:
        return AlgebraElement(descriptor, _decode_array(obj, depth))
    except (TypeError, ValueError) as exc:
        raise InvalidOperandError(f"bad element data for {descriptor}: {exc}") from None


def encode_vector(x: ModuleVector) -> dict:
    return {
        "algebra": encode_descriptor(x.algebra),
        "rank": x.rank,
        "coords": [_encode_array(c) for c in x.data],
    }


def decode_vector(obj) -> ModuleVector:
    try:
        desc = decode_descriptor(obj["algebra"])
        coords = obj["coords"]
        rank = int(obj.get("rank", len(coords)))
    except (KeyError, TypeError) as exc:
        raise InvalidOperandError(f"bad vector encoding: {exc}") from None
    if rank != len(coords):
        raise InvalidOperandError(f"rank {rank} but {len(coords)} coordinates")
    return ModuleVector.from_coords([decode_element(desc, c) for c in coords])


def encode_frame(f: TwoFrame) -> dict:
    return {
        "associate": encode_vector(f.associate),
        "vectors": [encode_vector(v) for v in f.vectors],
        "claimed_bounds": list(f.claimed_bounds) if f.claimed_bounds is not None else None,
    }


def decode_frame(obj, check_independence: bool = True) -> TwoFrame:
    try:
        xi = decode_vector(obj["associate"])
        vectors = [decode_vector(v) for v in obj["vectors"]]
        bounds = obj.get("claimed_bounds")
    except (KeyError, TypeError) as exc:
        raise InvalidOperandError(f"bad frame encoding: {exc}") from None
    if bounds is not None:
        if len(bounds) != 2:
            raise InvalidOperandError("claimed_bounds must be [A, B]")
        bounds = (float(bounds[0]), float(bounds[1]))
    return TwoFrame(vectors, xi, bounds, check_independence=check_independence)


def encode_verdict(v: BoundsVerdict) -> dict:
    return {
        "pass": v.passed,
        "claimed": list(v.claimed),
        "optimal": list(v.optimal),
        "lower_ok": v.lower_ok,
        "upper_ok": v.upper_ok,
        "witness": encode_vector(v.witness) if v.witness is not None else None,
        "witness_point": v.witness_point,
        "witness_form": v.witness_form,
        "witness_norm": v.witness_norm,
    }


def jsonable(obj):
    """Recursively turn library values into JSON-ready Python data.

    Non-finite floats become the strings ``"inf"``, ``"-inf"``, ``"nan"``.
    """
    if isinstance(obj, ModuleVector):
        return encode_vector(obj)
    if isinstance(obj, AlgebraElement):
        return {"algebra": encode_descriptor(obj.descriptor), "data": encode_element(obj)}
    if isinstance(obj, BoundsVerdict):
        return encode_verdict(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    return obj


def dumps(obj, **kw) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, allow_nan=False, **kw)
