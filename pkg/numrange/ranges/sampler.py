"""Monte-Carlo clouds of W_n(T) and their sharpening by support maximizers."""

from __future__ import annotations

import cmath
import logging
import math

import numpy as np

from .. import defaults
from ..errors import ContractViolationError, InvalidInputError
from ..frames import SEED_MASK, Frame, check_size, complex_gaussian, derive_seed, haar_block, make_rng
from ..numerics import ComplexMatrix
from ..utils import ThreadPool
from .point import CloudMeta, PointCloud, tau
from .support import support_exact_1d, support_stiefel

logger = logging.getLogger(__name__)

DIRECTIONS_STREAM = 0xD1


class CloudSampler(ThreadPool):
    """Thread pool producing chunks of Haar samples.

    Chunk ``k`` draws from the generator seeded with ``(seed, k)``, so the
    cloud only depends on ``(T, n, count, seed)``.
    """

    def __init__(self, T, n, seed, thread_num=1, name="sampler"):
        super().__init__(thread_num=thread_num, name=name)
        self.T = T
        self.n = n
        self.seed = seed

    def process(self, task, **kwargs):
        k, size = task
        rng = make_rng(np.random.SeedSequence([int(self.seed) & SEED_MASK, k]))
        W = haar_block(self.T.d, self.n, size, rng)
        values = np.einsum("kij,kij->kj", W.conj(), np.matmul(self.T.entries, W))
        self.logger.debug("chunk %d: %d samples", k, size)
        return values, W


def sample_cloud(T, n, count=None, seed=0, workers=1):
    """Sample ``count`` points ``tau(T, e)`` with Haar-distributed frames ``e``.

    Raises:
        DimensionError: when ``n > d``, since then no orthonormal n-frame exists.
    """
    T = ComplexMatrix.coerce(T)
    check_size(T.d, n)
    count = defaults.SAMPLES if count is None else int(count)
    if count < 1:
        raise InvalidInputError(f"count must be positive, got {count}")
    chunk = defaults.SAMPLE_CHUNK
    tasks = [(k, min(chunk, count - k * chunk)) for k in range(math.ceil(count / chunk))]
    logger.info("sampling %d points of W_%d for matrix %s", count, n, T.fingerprint)
    parts = CloudSampler(T, n, seed, thread_num=workers).map(tasks)
    values = np.concatenate([v for v, _ in parts])
    witnesses = np.concatenate([w for _, w in parts])
    meta = CloudMeta(d=T.d, fingerprint=T.fingerprint, sampler="haar", seed=int(seed), count=count)
    return PointCloud(values, witnesses, meta)


def boundary_directions(n, count=None, seed=0):
    """Unit directions used to locate boundary points.

    ``e^{2 pi i k / count}`` for ``n = 1``, seeded Gaussian directions otherwise.
    """
    count = defaults.DIRECTIONS if count is None else int(count)
    if n == 1:
        return np.array([[cmath.exp(2j * math.pi * k / count)] for k in range(count)])
    rng = make_rng(derive_seed(seed, DIRECTIONS_STREAM))
    W = complex_gaussian(rng, (count, n))
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def augment_cloud(T, cloud, directions=None, restarts=None, seed=0, workers=1):
    """Append the support maximizer of every boundary direction to ``cloud``.

    ``directions`` is either a count passed to :func:`boundary_directions` or
    an explicit ``(count, n)`` array of unit directions. For ``n = 1`` the
    maximizer is the top eigenvector of the Hermitian part; for larger ``n`` it
    comes from :func:`support_stiefel`.
    """
    T = ComplexMatrix.coerce(T)
    if cloud.fingerprint != T.fingerprint:
        raise ContractViolationError(f"cloud of matrix {cloud.fingerprint} used with matrix {T.fingerprint}")
    n = cloud.n
    if directions is None or np.ndim(directions) == 0:
        dirs = boundary_directions(n, directions, seed)
    else:
        dirs = np.asarray(directions, dtype=np.complex128).reshape(-1, n)
    frames = []
    for k, w in enumerate(dirs):
        if n == 1:
            _, vector = support_exact_1d(T, cmath.phase(w[0]))
            frames.append(Frame(vector.reshape(-1, 1)))
        else:
            result = support_stiefel(T, n, w, restarts=restarts, seed=derive_seed(seed, k), workers=workers)
            frames.append(result.maximizer)
    logger.info("added %d support maximizers to the cloud", len(frames))
    witnesses = np.array([f.columns for f in frames])
    values = np.array([tau(T, f) for f in frames])
    extra = PointCloud(values, witnesses, CloudMeta(T.d, T.fingerprint, "support", int(seed), len(frames)))
    return cloud.concat(extra, sampler=f"{cloud.meta.sampler}+support")


def diagonal_mixture_cloud(diagonal, n, count, seed=0):
    """Points of ``W_n(diag(lambda))`` computed as mixtures ``sum_i |U_ij|^2 lambda_i``.

    An independent oracle for diagonal matrices: the mixture matrix ``|U_ij|^2``
    of the first ``n`` columns of a Haar unitary is column-stochastic and
    row-substochastic.
    """
    lam = np.asarray(diagonal, dtype=np.complex128).reshape(-1)
    check_size(lam.shape[0], n)
    rng = make_rng(derive_seed(seed, n))
    U = haar_block(lam.shape[0], lam.shape[0], count, rng)
    mixtures = np.abs(U[:, :, :n]) ** 2
    return np.einsum("i,kij->kj", lam, mixtures)
