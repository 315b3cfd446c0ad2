"""Dense complex linear-algebra kernels.

Everything here is a pure function of its inputs. Matrices are carried by
:class:`ComplexMatrix`, a thin immutable wrapper around a ``complex128`` array.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import defaults
from .errors import ContractViolationError, DegenerateInputError, DimensionError, InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """A dense ``d x d`` complex matrix with finite entries.

    Attributes:
        entries (ndarray): read-only ``complex128`` array of shape ``(d, d)``.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InvalidInputError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def coerce(cls, obj):
        return obj if isinstance(obj, cls) else cls(obj)

    @classmethod
    def from_pairs(cls, d, pairs):
        """Build from ``d * d`` row-major ``[re, im]`` pairs."""
        arr = np.asarray(pairs, dtype=np.float64)
        if arr.shape != (d * d, 2):
            raise DimensionError(f"expected {d * d} [re, im] pairs, got array of shape {arr.shape}")
        return cls((arr[:, 0] + 1j * arr[:, 1]).reshape(d, d))

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d, dtype=np.complex128))

    @classmethod
    def diagonal(cls, values):
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    @property
    def d(self):
        return self.entries.shape[0]

    def to_pairs(self):
        flat = self.entries.reshape(-1)
        return [[float(z.real), float(z.imag)] for z in flat]

    def adjoint(self):
        return ComplexMatrix(self.entries.conj().T)

    def scaled(self, c):
        return ComplexMatrix(c * self.entries)

    @cached_property
    def norm(self):
        """Spectral norm."""
        return float(np.linalg.norm(self.entries, 2))

    @cached_property
    def fingerprint(self):
        """Dimension plus a 64-bit digest of the little-endian entry bytes."""
        digest = hashlib.blake2b(self.entries.astype("<c16").tobytes(order="C"), digest_size=8)
        return f"{self.d}:{digest.hexdigest()}"

    def __matmul__(self, other):
        return self.entries @ other

    def __eq__(self, other):
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.array_equal(self.entries, other.entries))

    __hash__ = None

    def __repr__(self):
        return f"ComplexMatrix(d={self.d}, fingerprint={self.fingerprint!r})"


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Eigen-decomposition of a Hermitian matrix.

    Attributes:
        values (ndarray): real eigenvalues sorted descending.
        vectors (ndarray): ``d x d`` matrix whose columns are the matching orthonormal eigenvectors.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def top(self):
        return float(self.values[0]), self.vectors[:, 0]

    @property
    def bottom(self):
        return float(self.values[-1]), self.vectors[:, -1]


def _finite_scalar(w, name="w"):
    try:
        w = complex(w)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"{name} must be a complex scalar, got {w!r}") from e
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise InvalidInputError(f"{name} must be finite, got {w!r}")
    return w


def hermitian_part(T, w=1.0):
    """Return ``(conj(w) T + w T*) / 2``.

    Its quadratic form is ``<Hx, x> = Re(conj(w) <Tx, x>)``, so the top
    eigenvalue is the support value of the numerical range in direction ``w``.

    >>> H = hermitian_part(ComplexMatrix([[0, 1], [0, 0]]), 1)
    >>> H.entries.real.tolist()
    [[0.0, 0.5], [0.5, 0.0]]
    """
    T = ComplexMatrix.coerce(T)
    w = _finite_scalar(w)
    return ComplexMatrix((w.conjugate() * T.entries + w * T.adjoint().entries) / 2)


def is_hermitian(H, rtol=None):
    rtol = defaults.HERMITIAN_RTOL if rtol is None else rtol
    A = ComplexMatrix.coerce(H).entries
    return float(np.linalg.norm(A - A.conj().T)) <= rtol * max(float(np.linalg.norm(A)), np.finfo(float).tiny)


def _offdiag_norm(A):
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def _jacobi_rotate(A, V, p, q):
    apq = A[p, q]
    beta = abs(apq)
    if beta == 0.0:
        return
    app = A[p, p].real
    aqq = A[q, q].real
    theta = (aqq - app) / (2.0 * beta)
    t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.hypot(t, 1.0)
    s = t * c
    # phase that turns the (p, q) block real symmetric
    ph = apq.conjugate() / beta
    g = np.array([[c, s], [-s * ph, c * ph]], dtype=np.complex128)
    idx = [p, q]
    A[:, idx] = A[:, idx] @ g
    A[idx, :] = g.conj().T @ A[idx, :]
    A[p, q] = A[q, p] = 0.0
    A[p, p] = A[p, p].real
    A[q, q] = A[q, q].real
    V[:, idx] = V[:, idx] @ g


def hermitian_eigensystem(H, rtol=None, max_sweeps=None):
    """Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius mass drops below
    ``JACOBI_OFFDIAG_RTOL * ||H||`` or ``max_sweeps`` is reached.

    Args:
        H (ComplexMatrix): Hermitian input.
        rtol (float, optional): Hermitian acceptance tolerance, relative to ``||H||``.
        max_sweeps (int, optional): sweep cap.

    Returns:
        HermitianEigenSystem: eigenvalues descending, eigenvectors as columns.
    """
    H = ComplexMatrix.coerce(H)
    if not is_hermitian(H, rtol):
        raise ContractViolationError("hermitian_eigensystem requires a Hermitian matrix")
    max_sweeps = defaults.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps
    A = np.array(H.entries, dtype=np.complex128)
    A = (A + A.conj().T) / 2
    d = A.shape[0]
    V = np.eye(d, dtype=np.complex128)
    target = defaults.JACOBI_OFFDIAG_RTOL * float(np.linalg.norm(A))
    for sweep in range(max_sweeps):
        if _offdiag_norm(A) <= target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                _jacobi_rotate(A, V, p, q)
    else:
        if _offdiag_norm(A) > target:
            logger.warning("Jacobi stopped after %d sweeps, off-diagonal mass %.3e", max_sweeps, _offdiag_norm(A))
    values = A.diagonal().real.copy()
    order = np.argsort(-values, kind="stable")
    return HermitianEigenSystem(values=values[order], vectors=V[:, order])


def gram_schmidt(vectors, tol=None):
    """Orthonormalize a list of vectors, preserving their span and order.

    The first output column is ``vectors[0]`` normalized. Each vector is
    projected twice against the previous columns.

    Args:
        vectors: sequence of ``d``-vectors (rows of a 2-D array are also accepted).
        tol (float, optional): a normalized vector whose residual norm falls below
            this value is declared linearly dependent.

    Returns:
        ndarray: ``d x k`` array with orthonormal columns.

    >>> gram_schmidt([[2, 0]]).real.tolist()
    [[1.0], [0.0]]
    """
    tol = defaults.RANK_TOL if tol is None else tol
    rows = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    if not rows:
        raise InvalidInputError("gram_schmidt needs at least one vector")
    d = rows[0].shape[0]
    if len(rows) > d:
        raise DegenerateInputError(f"{len(rows)} vectors in dimension {d} are dependent", index=d)
    Q = np.zeros((d, len(rows)), dtype=np.complex128)
    for k, v in enumerate(rows):
        if v.shape[0] != d:
            raise DimensionError(f"vector {k} has length {v.shape[0]}, expected {d}")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError(f"vector {k} has non-finite entries")
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise DegenerateInputError(f"vector {k} is zero", index=k)
        x = v / norm
        for _ in range(2):
            x = x - Q[:, :k] @ (Q[:, :k].conj().T @ x)
        residual = float(np.linalg.norm(x))
        if residual <= tol:
            raise DegenerateInputError(f"vector {k} lies in the span of the previous vectors", index=k)
        Q[:, k] = v / norm if k == 0 else x / residual
    return Q


def eigen_residual(T, x, lam):
    """``||Tx - lam x||``."""
    T = ComplexMatrix.coerce(T)
    x = np.asarray(x, dtype=np.complex128)
    return float(np.linalg.norm(T.entries @ x - complex(lam) * x))


def min_singular_value(T, lam=0.0):
    """Smallest singular value of ``T - lam I``.

    Computed as the square root of the smallest eigenvalue of
    ``(T - lam I)* (T - lam I)``. Squaring limits the absolute accuracy to
    roughly ``sqrt(eps) * ||T||`` for non-diagonal input.
    """
    T = ComplexMatrix.coerce(T)
    lam = _finite_scalar(lam, "lambda")
    B = T.entries - lam * np.eye(T.d, dtype=np.complex128)
    gram = B.conj().T @ B
    system = hermitian_eigensystem(ComplexMatrix((gram + gram.conj().T) / 2))
    return math.sqrt(max(0.0, system.bottom[0]))


def unitary_conjugate(T, U):
    """``U T U*``."""
    T = ComplexMatrix.coerce(T)
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != T.entries.shape:
        raise DimensionError(f"unitary of shape {U.shape} does not match matrix of dimension {T.d}")
    return ComplexMatrix(U @ T.entries @ U.conj().T)
