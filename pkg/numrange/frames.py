"""Orthonormal n-frames in C^d.

A :class:`Frame` stores ``n`` orthonormal columns of ``C^d``. Frames are
sampled Haar-uniformly and perturbed along two explicit smooth paths that keep
them orthonormal:

* exterior mix: column ``j`` becomes ``t u + sqrt(1 - t^2) e_j`` for a unit
  ``u`` orthogonal to every column;
* planar rotation: columns ``j`` and ``k`` rotate inside their own span with
  phase ``alpha``.

Path parameters are restricted to ``|t| <= 1/2``. Indices are 0-based in the
Python API and 1-based in serialized artifacts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from . import defaults
from .errors import ContractViolationError, DegenerateInputError, DimensionError, InvalidInputError
from .numerics import gram_schmidt

logger = logging.getLogger(__name__)

EXTERIOR_MIX = "exterior-mix"
PLANAR_ROTATION = "planar-rotation"

SEED_MASK = (1 << 64) - 1


def make_rng(seed):
    """PCG64 generator for a 64-bit seed (negative seeds wrap modulo 2**64)."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(int(seed) & SEED_MASK)


def derive_seed(seed, *keys):
    """Independent 64-bit child seed for ``(seed, *keys)``."""
    sequence = np.random.SeedSequence([int(seed) & SEED_MASK, *(int(k) & SEED_MASK for k in keys)])
    return int(sequence.generate_state(1, np.uint64)[0])


def complex_gaussian(rng, shape):
    """Standard complex normal entries (``E|z|^2 = 1``)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def check_size(d, n):
    if n < 1:
        raise DimensionError(f"frame size must be at least 1, got {n}")
    if n > d:
        raise DimensionError(f"no orthonormal {n}-frame exists in dimension {d}: W_n(T) is empty when dim H < n")


@dataclass(frozen=True, eq=False)
class Frame:
    """Orthonormal system ``e_1, ..., e_n`` stored as the columns of a ``d x n`` array.

    Attributes:
        columns (ndarray): read-only ``complex128`` array of shape ``(d, n)``.
    """

    columns: np.ndarray

    def __post_init__(self):
        cols = np.array(self.columns, dtype=np.complex128)
        if cols.ndim == 1:
            cols = cols.reshape(-1, 1)
        if cols.ndim != 2:
            raise InvalidInputError(f"frame columns must be 2-D, got shape {cols.shape}")
        d, n = cols.shape
        check_size(d, n)
        if not np.all(np.isfinite(cols)):
            raise InvalidInputError("frame columns must be finite")
        residual = float(np.linalg.norm(cols.conj().T @ cols - np.eye(n)))
        if residual > defaults.FRAME_GRAM_TOL:
            raise ContractViolationError(f"frame columns are not orthonormal (Gram residual {residual:.3e})")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_vectors(cls, vectors):
        return cls(gram_schmidt(vectors))

    @classmethod
    def standard(cls, d, indices):
        """Frame made of the standard basis vectors ``indices`` (0-based)."""
        return cls(np.eye(d, dtype=np.complex128)[:, list(indices)])

    @property
    def d(self):
        return self.columns.shape[0]

    @property
    def n(self):
        return self.columns.shape[1]

    def column(self, j):
        return self.columns[:, j]

    def gram_residual(self):
        return float(np.linalg.norm(self.columns.conj().T @ self.columns - np.eye(self.n)))

    def projector(self):
        return self.columns @ self.columns.conj().T

    def truncate(self, k):
        if not 1 <= k <= self.n:
            raise DimensionError(f"cannot keep {k} columns of a {self.n}-frame")
        return Frame(self.columns[:, :k])

    def permute(self, pi):
        """Reorder columns so that new column ``i`` is old column ``pi[i]``."""
        return Frame(self.columns[:, check_permutation(pi, self.n)])

    def embed(self, outer):
        """Lift a frame of a compression back to the ambient space of ``outer``."""
        if outer.n != self.d:
            raise DimensionError(f"cannot embed a frame of C^{self.d} through a {outer.n}-frame")
        return Frame(outer.columns @ self.columns)

    def complete(self, n_new, rng):
        """Extend by random orthonormal columns until the frame has ``n_new`` columns."""
        check_size(self.d, n_new)
        frame = self
        while frame.n < n_new:
            u = random_exterior_vector(frame, rng)
            frame = Frame(np.column_stack([frame.columns, u]))
        return frame

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.columns.shape == other.columns.shape and bool(np.array_equal(self.columns, other.columns))

    __hash__ = None

    def __repr__(self):
        return f"Frame(d={self.d}, n={self.n})"


def check_permutation(pi, n):
    pi = [int(i) for i in pi]
    if sorted(pi) != list(range(n)):
        raise InvalidInputError(f"{pi} is not a permutation of 0..{n - 1}")
    return pi


@dataclass(frozen=True, eq=False)
class PathProbe:
    """One smooth path through a frame.

    Attributes:
        kind (str): ``"exterior-mix"`` or ``"planar-rotation"``.
        j (int): column moved along the path.
        k (int or None): partner column (planar rotation only).
        u (ndarray or None): unit vector orthogonal to the frame span (exterior mix only).
        alpha (float): phase of the planar rotation.
    """

    kind: str
    j: int
    k: int = None
    u: np.ndarray = field(default=None)
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind == EXTERIOR_MIX:
            if self.u is None:
                raise InvalidInputError("an exterior-mix probe needs a vector u")
            u = np.array(self.u, dtype=np.complex128).reshape(-1)
            if abs(float(np.linalg.norm(u)) - 1.0) > defaults.UNIT_TOL:
                raise ContractViolationError("exterior vector u must have unit norm")
            u.setflags(write=False)
            object.__setattr__(self, "u", u)
        elif self.kind == PLANAR_ROTATION:
            if self.k is None or self.k == self.j:
                raise InvalidInputError("a planar rotation needs two distinct columns")
            object.__setattr__(self, "alpha", float(self.alpha) % (2 * math.pi))
        else:
            raise InvalidInputError(f"unknown probe kind {self.kind!r}")

    @classmethod
    def exterior(cls, j, u):
        return cls(EXTERIOR_MIX, j, u=u)

    @classmethod
    def planar(cls, j, k, alpha=0.0):
        return cls(PLANAR_ROTATION, j, k=k, alpha=alpha)

    def validate(self, frame):
        if not 0 <= self.j < frame.n:
            raise ContractViolationError(f"probe column {self.j} outside a {frame.n}-frame")
        if self.kind == EXTERIOR_MIX:
            if self.u.shape[0] != frame.d:
                raise ContractViolationError(f"probe vector has length {self.u.shape[0]}, frame lives in C^{frame.d}")
            overlap = float(np.max(np.abs(frame.columns.conj().T @ self.u)))
            if overlap > defaults.FRAME_GRAM_TOL:
                raise ContractViolationError(f"probe vector is not orthogonal to the frame (overlap {overlap:.3e})")
        else:
            if frame.n < 2:
                raise DimensionError("planar rotations need at least two columns")
            if not 0 <= self.k < frame.n:
                raise ContractViolationError(f"probe partner column {self.k} outside a {frame.n}-frame")

    def to_dict(self):
        out = {"kind": self.kind, "j": self.j + 1}
        if self.kind == EXTERIOR_MIX:
            out["u"] = [[float(z.real), float(z.imag)] for z in self.u]
        else:
            out["k"] = self.k + 1
            out["alpha"] = self.alpha
        return out


def _check_t(t):
    if not abs(t) <= defaults.PATH_T_MAX:
        raise ContractViolationError(f"path parameter must satisfy |t| <= {defaults.PATH_T_MAX}, got {t}")
    return float(t)


def exterior_mix_point(frame, probe, t):
    """Frame with column ``j`` replaced by ``t u + sqrt(1 - t^2) e_j``."""
    t = _check_t(t)
    if probe.kind != EXTERIOR_MIX:
        raise ContractViolationError(f"expected an exterior-mix probe, got {probe.kind}")
    probe.validate(frame)
    if t == 0.0:
        return frame
    cols = np.array(frame.columns)
    cols[:, probe.j] = t * probe.u + math.sqrt(1.0 - t * t) * frame.columns[:, probe.j]
    return Frame(cols)


def planar_rotation_point(frame, probe, t):
    """Frame with columns ``j`` and ``k`` rotated by ``t`` with phase ``alpha``."""
    t = _check_t(t)
    if frame.n < 2:
        raise DimensionError("planar rotations need at least two columns")
    if probe.kind != PLANAR_ROTATION:
        raise ContractViolationError(f"expected a planar-rotation probe, got {probe.kind}")
    probe.validate(frame)
    if t == 0.0:
        return frame
    r = math.sqrt(1.0 - t * t)
    phase = complex(math.cos(probe.alpha), math.sin(probe.alpha))
    e_j = frame.columns[:, probe.j]
    e_k = frame.columns[:, probe.k]
    cols = np.array(frame.columns)
    cols[:, probe.j] = r * e_j + phase * t * e_k
    cols[:, probe.k] = r * e_k - phase.conjugate() * t * e_j
    return Frame(cols)


def probe_point(frame, probe, t):
    if probe.kind == EXTERIOR_MIX:
        return exterior_mix_point(frame, probe, t)
    return planar_rotation_point(frame, probe, t)


def distance_to_span(x, frame):
    """``||x - F F* x||``, the distance from ``x`` to the column span."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.shape[0] != frame.d:
        raise DimensionError(f"vector of length {x.shape[0]} does not live in C^{frame.d}")
    F = frame.columns
    return float(np.linalg.norm(x - F @ (F.conj().T @ x)))


def haar_frame(d, n, seed):
    """Haar-uniform ``n``-frame in ``C^d``: complex Gaussian columns, then Gram-Schmidt.

    The generator is numpy's PCG64 seeded with ``seed``; fixed ``(d, n, seed)``
    gives bit-identical frames.
    """
    check_size(d, n)
    rng = make_rng(seed)
    G = complex_gaussian(rng, (d, n))
    return Frame(gram_schmidt(G.T))


def haar_block(d, n, count, rng):
    """``count`` Haar frames as a ``(count, d, n)`` array.

    Batched QR with the phases of ``diag(R)`` moved into ``Q``, i.e. the
    Gram-Schmidt frame of each Gaussian block.
    """
    check_size(d, n)
    G = complex_gaussian(rng, (count, d, n))
    Q, R = np.linalg.qr(G)
    diag = np.diagonal(R, axis1=1, axis2=2)
    return Q * (diag / np.abs(diag))[:, None, :]


@retry(
    stop=stop_after_attempt(defaults.MAX_REDRAWS),
    retry=retry_if_exception_type(DegenerateInputError),
    reraise=True,
)
def random_exterior_vector(frame, rng):
    """Unit vector orthogonal to the frame span, drawn from a projected Gaussian.

    Draws whose projected norm falls below ``EXTERIOR_MIN_NORM`` are rejected
    and redrawn.
    """
    if frame.n == frame.d:
        raise DimensionError("the frame spans the whole space, its orthogonal complement is {0}")
    F = frame.columns
    x = complex_gaussian(rng, frame.d)
    for _ in range(2):
        x = x - F @ (F.conj().T @ x)
    norm = float(np.linalg.norm(x))
    if norm < defaults.EXTERIOR_MIN_NORM:
        logger.debug("exterior draw rejected, projected norm %.3e", norm)
        raise DegenerateInputError(f"projected exterior draw has norm {norm:.3e}")
    return x / norm


def complement_basis(frame):
    """Orthonormal basis of the orthogonal complement of the frame span, as a ``d x (d - n)`` array."""
    Q, _ = np.linalg.qr(np.hstack([frame.columns, np.eye(frame.d, dtype=np.complex128)]))
    return Q[:, frame.n : frame.d]
