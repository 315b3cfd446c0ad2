"""First-order path derivatives of ``tau`` through a frame.

Along the exterior mix ``e_j(t) = t u + sqrt(1 - t^2) e_j`` only component
``j`` of ``tau`` moves, with velocity ``<Tu, e_j> + <Te_j, u>``. Along the
planar rotation of columns ``j`` and ``k`` with phase ``alpha`` component ``j``
moves with velocity ``e^{-i alpha} <Te_j, e_k> + e^{i alpha} <Te_k, e_j>`` and
component ``k`` with the opposite velocity.

All probe derivatives vanish exactly when the frame span reduces ``T`` and the
compression to it is diagonal, which is the first-order condition satisfied by
the witness of a pseudocorner.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .errors import DimensionError
from .frames import (
    EXTERIOR_MIX,
    PathProbe,
    complement_basis,
    derive_seed,
    distance_to_span,
    make_rng,
    random_exterior_vector,
)
from .numerics import ComplexMatrix
from .ranges.point import compress

logger = logging.getLogger(__name__)

PLANAR_PHASES = (0.0, math.pi / 2)
PROBE_STREAM = 0xE7


def _inner(x, y):
    # <x, y>, linear in x
    return complex(np.vdot(y, x))


def probe_velocity(T, frame, probe):
    """``d/dt tau(T, probe_point(frame, probe, t))`` at ``t = 0``, as a vector of ``C^n``."""
    T = ComplexMatrix.coerce(T)
    probe.validate(frame)
    A = T.entries
    velocity = np.zeros(frame.n, dtype=np.complex128)
    e_j = frame.column(probe.j)
    if probe.kind == EXTERIOR_MIX:
        velocity[probe.j] = _inner(A @ probe.u, e_j) + _inner(A @ e_j, probe.u)
        return velocity
    e_k = frame.column(probe.k)
    phase = complex(math.cos(probe.alpha), math.sin(probe.alpha))
    rate = phase.conjugate() * _inner(A @ e_j, e_k) + phase * _inner(A @ e_k, e_j)
    velocity[probe.j] = rate
    velocity[probe.k] = -rate
    return velocity


def probe_derivative(T, frame, probe):
    """Velocity of the moved component ``j``."""
    return complex(probe_velocity(T, frame, probe)[probe.j])


@dataclass(frozen=True)
class ProbeReport:
    """Analytic derivatives of every probe evaluated at one frame.

    Attributes:
        probes (list): ``(PathProbe, derivative)`` pairs.
        max_abs (float): largest ``|derivative|``, 0 when no probe applies.
    """

    probes: list = field(default_factory=list)
    max_abs: float = 0.0

    @classmethod
    def from_probes(cls, probes):
        max_abs = max((abs(z) for _, z in probes), default=0.0)
        return cls(probes=list(probes), max_abs=float(max_abs))

    def vanishes(self, T, rtol=None):
        rtol = defaults.PROBE_RTOL if rtol is None else rtol
        return self.max_abs <= rtol * ComplexMatrix.coerce(T).norm

    def to_dict(self):
        return {
            "max_abs": self.max_abs,
            "probes": [{**probe.to_dict(), "derivative": [z.real, z.imag]} for probe, z in self.probes],
        }


def exterior_probes(frame, exterior_count=None, seed=0, basis=True):
    """Exterior-mix probes: complement basis vectors and random exterior vectors, each with its ``i u`` variant."""
    exterior_count = defaults.EXTERIOR_COUNT if exterior_count is None else int(exterior_count)
    if frame.n == frame.d:
        if exterior_count > 0 or basis:
            logger.warning("frame spans C^%d, its orthogonal complement is {0}: exterior probes skipped", frame.d)
        return []
    vectors = list(complement_basis(frame).T) if basis else []
    rng = make_rng(derive_seed(seed, PROBE_STREAM))
    vectors += [random_exterior_vector(frame, rng) for _ in range(exterior_count)]
    probes = []
    for j in range(frame.n):
        for u in vectors:
            probes.append(PathProbe.exterior(j, u))
            probes.append(PathProbe.exterior(j, 1j * u))
    return probes


def planar_probes(frame):
    return [
        PathProbe.planar(j, k, alpha)
        for j in range(frame.n)
        for k in range(j + 1, frame.n)
        for alpha in PLANAR_PHASES
    ]


def probe_derivatives(T, frame, exterior_count=None, seed=0, basis=True):
    """Evaluate every exterior-mix and planar-rotation probe at ``frame``.

    Args:
        T (ComplexMatrix): the operator.
        frame (Frame): witness frame.
        exterior_count (int): random exterior vectors per column, on top of the
            complement basis when ``basis`` is true.
        seed (int): seed of the random exterior vectors.
        basis (bool): also probe along an orthonormal basis of the complement.

    Returns:
        ProbeReport: ``max_abs <= PROBE_RTOL * ||T||`` is the first-order
        pseudocorner condition.
    """
    T = ComplexMatrix.coerce(T)
    if frame.d != T.d:
        raise DimensionError(f"frame lives in C^{frame.d}, matrix has dimension {T.d}")
    probes = exterior_probes(frame, exterior_count, seed, basis) + planar_probes(frame)
    report = ProbeReport.from_probes([(p, probe_derivative(T, frame, p)) for p in probes])
    logger.debug("%d probes, max |derivative| %.3e", len(report.probes), report.max_abs)
    return report


def invariance_residuals(T, frame):
    """Distances measuring how far the frame span is from an invariant subspace.

    Returns:
        dict: ``span_distances`` (``dist(T e_j, span)`` per column),
        ``offdiagonal`` (Frobenius mass off the diagonal of the compression)
        and ``invariance`` (``||T F - F compress(T, F)||``).
    """
    T = ComplexMatrix.coerce(T)
    F = frame.columns
    C = compress(T, frame).entries
    image = T.entries @ F
    return {
        "span_distances": [distance_to_span(image[:, j], frame) for j in range(frame.n)],
        "offdiagonal": float(np.linalg.norm(C - np.diag(np.diag(C)))),
        "invariance": float(np.linalg.norm(image - F @ C)),
    }
