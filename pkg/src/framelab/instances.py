"""Seeded random instances.

All randomness goes through ``numpy.random.Generator(PCG64(seed))``
(``numpy.random.default_rng``), whose stream is fixed across platforms for a
given seed and numpy's stability guarantees.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import algebra as alg
from .algebra import AlgebraDescriptor
from .errors import GenerationFailedError, InvalidOperandError
from .frames import TwoFrame, frame_bounds
from .module import ModuleFrame, ModuleVector, inner, random_vector
from .quotient import pivot_complement
from .two_inner import TwoInnerSpace

MAX_RETRIES = 100


@dataclass(frozen=True)
class SuiteConfig:
    algebra: str = "diagonal:3"
    rank: int = 4
    frame_size: int = 6
    trials: int = 500
    seed: int = 1
    tol: float = 1e-9
    format: str = "json"
    kind: str = "random"          # "random" or "parseval"
    min_lower: float = 0.01

    def __post_init__(self):
        alg.parse_descriptor(self.algebra)
        if int(self.rank) < 2:
            raise InvalidOperandError("rank must be at least 2")
        if int(self.frame_size) < 0:
            raise InvalidOperandError("frame_size must be non-negative")
        if int(self.trials) < 0:
            raise InvalidOperandError("trials must be non-negative")
        if not float(self.tol) > 0:
            raise InvalidOperandError("tol must be positive")
        if self.format not in ("json", "text"):
            raise InvalidOperandError("format must be 'json' or 'text'")
        if self.kind not in ("random", "parseval"):
            raise InvalidOperandError("kind must be 'random' or 'parseval'")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidOperandError("seed must fit in 64 bits")

    @property
    def descriptor(self) -> AlgebraDescriptor:
        return alg.parse_descriptor(self.algebra)

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise InvalidOperandError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if isinstance(data.get("algebra"), dict):
            from .serialization import decode_descriptor
            data["algebra"] = str(decode_descriptor(data["algebra"]))
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise InvalidOperandError(str(exc)) from None

    def to_dict(self) -> dict:
        return asdict(self)


def random_associate(algebra: AlgebraDescriptor, rank: int, rng: np.random.Generator,
                     ratio: float = 0.1) -> ModuleVector:
    """``xi`` with ``<xi, xi>`` well inside the invertibles.

    Resamples until the smallest spectral value of ``<xi, xi>`` is at least
    ``ratio`` times the largest.
    """
    for _ in range(MAX_RETRIES):
        xi = random_vector(algebra, rank, rng)
        spec = alg.spectrum(inner(xi, xi))
        if spec[0] >= ratio * spec[-1]:
            return xi
    raise GenerationFailedError(f"no associate with spectral ratio {ratio} after {MAX_RETRIES} draws")


def parseval_vectors(xi: ModuleVector, size: int, rng: np.random.Generator) -> list[ModuleVector]:
    """``size >= m - 1`` vectors forming a Parseval A-2-frame for ``xi``.

    At each point the complement coordinates are the rows of a random
    ``size x (m-1)`` isometry, scaled by ``1 / |xi(t)|``.
    """
    m = xi.rank
    d = m - 1
    if size < d:
        raise InvalidOperandError(f"a Parseval frame needs at least {d} vectors")
    pts = xi.points()
    n = pts.shape[0]
    cols = np.empty((n, m, size), dtype=complex)
    for t in range(n):
        z = rng.standard_normal((size, d)) + 1j * rng.standard_normal((size, d))
        iso, _ = np.linalg.qr(z)
        U = pivot_complement(pts[t])
        cols[t] = U @ iso.conj().T / np.linalg.norm(pts[t])
    return [ModuleVector.from_points(xi.algebra, cols[:, :, i]) for i in range(size)]


def random_frame(algebra: AlgebraDescriptor, rank: int, size: int, rng: np.random.Generator,
                 kind: str = "random", min_lower: float = 0.01, xi: ModuleVector = None) -> TwoFrame:
    """Random A-2-frame with a well-conditioned associate.

    Random frames are redrawn until the lower bound reaches ``min_lower``;
    families with ``size < rank - 1`` cannot span the complement and are
    returned as drawn.
    """
    if not algebra.is_commutative:
        raise InvalidOperandError("frames need a commutative algebra")
    if xi is None:
        xi = random_associate(algebra, rank, rng)
    if kind == "parseval":
        return TwoFrame(parseval_vectors(xi, size, rng), xi)
    if size < rank - 1:
        return TwoFrame([random_vector(algebra, rank, rng) for _ in range(size)], xi)
    for _ in range(MAX_RETRIES):
        vectors = [random_vector(algebra, rank, rng) for _ in range(size)]
        try:
            f = TwoFrame(vectors, xi)
        except InvalidOperandError:
            continue
        if frame_bounds(f)[0] >= min_lower:
            return f
    raise GenerationFailedError(f"no frame with lower bound >= {min_lower} after {MAX_RETRIES} draws")


def random_module_frame(algebra: AlgebraDescriptor, rank: int, size: int, rng: np.random.Generator) -> ModuleFrame:
    return ModuleFrame(tuple(random_vector(algebra, rank, rng) for _ in range(size)))


def generate_instance(config: SuiteConfig, rng: np.random.Generator = None):
    """``(TwoInnerSpace, TwoFrame)`` determined by ``config.seed``.

    The frame is ``None`` over non-commutative algebras.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    desc = config.descriptor
    space = TwoInnerSpace(desc, int(config.rank))
    if not desc.is_commutative:
        return space, None
    frame = random_frame(desc, space.rank, int(config.frame_size), rng, config.kind, config.min_lower)
    return space, frame
