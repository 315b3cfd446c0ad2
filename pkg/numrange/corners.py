"""Corner detection in sampled clouds and corner certification.

A point ``u`` of a set ``S`` in ``C^n`` is a corner when some non-zero
direction ``w`` and constants ``epsilon, delta > 0`` satisfy

    Re<v - u, w> >= delta |v - u| |w|   for every v in S with 0 < |v - u| < epsilon,

i.e. every nearby point of the set lies in a cone of half-angle
``arccos(delta)`` around ``w``. On a finite cloud the best ``(w, delta)`` is
found by projected subgradient ascent over the unit sphere of ``R^{2n}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import defaults
from .errors import ContractViolationError, DimensionError, InsufficientSamplingError, InvalidInputError
from .numerics import ComplexMatrix, eigen_residual
from .probes import probe_derivatives
from .ranges.point import RangePoint, complex_pairs, from_pairs, from_real_embedding, real_embedding
from .ranges.sampler import boundary_directions
from .utils import ThreadPool

logger = logging.getLogger(__name__)


def _snap(x, radius):
    if radius <= 0:
        return tuple(np.asarray(x, dtype=np.float64).tolist())
    return tuple(np.round(np.asarray(x) / radius).astype(np.int64).tolist())


def distinct_points(cloud, radius=None):
    """Embedded representatives of the cloud after merging points closer than ``radius``."""
    radius = cloud.coincidence_radius() if radius is None else radius
    x = cloud.embedded
    if radius <= 0:
        return np.unique(x, axis=0)
    _, idx = np.unique(np.round(x / radius), axis=0, return_index=True)
    return x[np.sort(idx)]


def default_epsilon(cloud):
    """``EPSILON_NN_FACTOR`` times the median nearest-neighbour distance between distinct points.

    A cloud whose points all coincide gets radius 1.
    """
    points = distinct_points(cloud)
    if len(points) < 2:
        return 1.0
    dist, _ = cKDTree(points).query(points, k=2)
    return float(defaults.EPSILON_NN_FACTOR * np.median(dist[:, 1]))


def _neighbour_radius(cloud, x, min_neighbours, coincide):
    """Radius of the ball around ``x`` holding ``min_neighbours`` points that do not coincide with ``x``."""
    m = len(cloud)
    k = min(m, 64)
    while True:
        dist, _ = cloud.tree.query(x, k=k)
        dist = np.atleast_1d(dist)
        far = dist[dist > coincide]
        if len(far) >= min_neighbours or k == m:
            return float(far[min(len(far), min_neighbours) - 1]) if len(far) else 0.0
        k = min(m, 2 * k)


def cone_constant(chords, w):
    """``min`` over unit chords of ``<chord, w>`` in the real embedding."""
    return float(np.min(chords @ w))


def cone_test(cloud, u, epsilon, min_neighbours=None):
    """Best cone direction and constant at ``u`` over its epsilon-neighbourhood.

    Cloud points within the coincidence radius of ``u`` are the point itself
    and are ignored. The direction is initialized with the normalized mean of
    the unit chords ``(v - u) / |v - u|`` and refined by ``SUBGRADIENT_STEPS``
    projected subgradient steps of size ``1/k`` on ``w -> min_v Re<v - u, w> / |v - u|``;
    the best iterate is kept.

    Args:
        cloud (PointCloud): the sample.
        u (RangePoint or array): candidate point.
        epsilon (float): neighbourhood radius (closed ball).
        min_neighbours (int, optional): grow the radius until at least this many
            non-coincident points are inside.

    Returns:
        tuple: ``(w, delta, radius, neighbour_count)`` where ``w`` is a unit vector
        of ``C^n``, ``delta`` may be negative, ``radius`` is the radius actually
        used. A cloud whose points all coincide with ``u`` returns
        ``(e_1, 1.0, epsilon, 0)``.

    Raises:
        InsufficientSamplingError: no cloud point in the neighbourhood.
    """
    value = u.value if isinstance(u, RangePoint) else np.asarray(u, dtype=np.complex128).reshape(-1)
    if value.shape[0] != cloud.n:
        raise DimensionError(f"candidate in C^{value.shape[0]} for a W_{cloud.n} cloud")
    if not epsilon > 0:
        raise ContractViolationError(f"epsilon must be positive, got {epsilon}")
    x = real_embedding(value)
    coincide = cloud.coincidence_radius()
    if float(np.max(np.linalg.norm(cloud.embedded - x, axis=1))) <= coincide:
        e_1 = np.zeros(cloud.n, dtype=np.complex128)
        e_1[0] = 1.0
        return e_1, 1.0, float(epsilon), 0

    radius = float(epsilon)
    if min_neighbours:
        radius = max(radius, _neighbour_radius(cloud, x, min_neighbours, coincide))
    idx = np.asarray(cloud.tree.query_ball_point(x, r=radius * (1 + 1e-9)), dtype=np.int64)
    if idx.size:
        diff = cloud.embedded[idx] - x
        norms = np.linalg.norm(diff, axis=1)
        keep = (norms > coincide) & (norms <= radius)
        diff, norms = diff[keep], norms[keep]
    else:
        norms = np.empty(0)
    if norms.size == 0:
        raise InsufficientSamplingError(f"no cloud point within {radius:.3e} of the candidate, densify the sample")
    chords = diff / norms[:, None]

    w = chords.mean(axis=0)
    if np.linalg.norm(w) <= 1e-12:
        w = chords[0].copy()
    w = w / np.linalg.norm(w)
    best_w, best = w, cone_constant(chords, w)
    for k in range(1, defaults.SUBGRADIENT_STEPS + 1):
        w = w + chords[int(np.argmin(chords @ w))] / k
        w = w / np.linalg.norm(w)
        delta = cone_constant(chords, w)
        if delta > best:
            best_w, best = w, delta
    return from_real_embedding(best_w), min(best, 1.0), radius, int(norms.size)


@dataclass(frozen=True, eq=False)
class CornerCertificate:
    """Cone certificate of a candidate corner, optionally with first-order data.

    Attributes:
        point (RangePoint): candidate with its witness frame.
        direction (ndarray): unit cone direction in ``C^n``.
        delta (float): achieved cone constant.
        epsilon (float): neighbourhood radius used.
        neighbor_count (int): non-coincident cloud points inside the neighbourhood.
        probe_max_derivative (float or None): largest probe derivative at the witness.
        eigen_residuals (list or None): ``||T e_j - lambda_j e_j||`` per column.
        fingerprint (str): fingerprint of the matrix the cloud was sampled from.
    """

    point: RangePoint
    direction: np.ndarray
    delta: float
    epsilon: float
    neighbor_count: int
    probe_max_derivative: float = None
    eigen_residuals: list = field(default=None)
    fingerprint: str = ""

    @property
    def is_certified(self):
        return self.probe_max_derivative is not None

    def to_dict(self):
        return {
            "fingerprint": self.fingerprint,
            "point": self.point.to_dict(),
            "direction": complex_pairs(self.direction),
            "delta": self.delta,
            "epsilon": self.epsilon,
            "neighbor_count": self.neighbor_count,
            "probe_max_derivative": self.probe_max_derivative,
            "eigen_residuals": self.eigen_residuals,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            point=RangePoint.from_dict(data["point"]),
            direction=from_pairs(data["direction"]),
            delta=data["delta"],
            epsilon=data["epsilon"],
            neighbor_count=data["neighbor_count"],
            probe_max_derivative=data.get("probe_max_derivative"),
            eigen_residuals=data.get("eigen_residuals"),
            fingerprint=data.get("fingerprint", ""),
        )

    def revalidate(self, cloud, T=None):
        """Re-check the certificate against ``cloud`` (and ``T`` when given).

        Returns:
            list: human readable problems, empty when the certificate holds.
        """
        problems = []
        if self.fingerprint and self.fingerprint != cloud.fingerprint:
            problems.append(f"certificate for matrix {self.fingerprint}, cloud of {cloud.fingerprint}")
        if abs(float(np.linalg.norm(self.direction)) - 1.0) > defaults.UNIT_TOL:
            problems.append("cone direction is not a unit vector")
        if T is not None and not self.point.is_consistent(T):
            problems.append(f"witness does not realize the point (error {self.point.witness_error(T):.3e})")
        if self.neighbor_count:
            x = real_embedding(self.point.value)
            diff = cloud.embedded - x
            norms = np.linalg.norm(diff, axis=1)
            inside = (norms > cloud.coincidence_radius()) & (norms <= self.epsilon)
            if np.any(inside):
                worst = cone_constant(diff[inside] / norms[inside][:, None], real_embedding(self.direction))
                if worst < self.delta - 1e-12:
                    problems.append(f"cone inequality fails: {worst:.6g} < delta {self.delta:.6g}")
        return problems


class ConeTester(ThreadPool):
    """Thread pool running :func:`cone_test` on candidate indices of one cloud.

    Candidates closer than the dedupe distance share a key and are tested once.
    """

    def __init__(self, cloud, epsilon, min_neighbours=None, thread_num=1, name="cone"):
        super().__init__(thread_num=thread_num, name=name)
        self.cloud = cloud
        self.epsilon = epsilon
        self.min_neighbours = min_neighbours
        self.dedupe = max(defaults.DEDUPE_DISTANCE, cloud.coincidence_radius())

    def task_key(self, idx, task):
        return _snap(self.cloud.embedded[task], self.dedupe)

    def process(self, task, **kwargs):
        point = self.cloud.point(task)
        w, delta, radius, count = cone_test(self.cloud, point, self.epsilon, self.min_neighbours)
        self.logger.debug("candidate #%d: delta %.4f over %d neighbours", task, delta, count)
        return CornerCertificate(
            point=point,
            direction=w,
            delta=delta,
            epsilon=radius,
            neighbor_count=count,
            fingerprint=self.cloud.fingerprint,
        )


def boundary_candidates(cloud, directions=None, seed=0):
    """Indices of the cloud points attaining ``max Re<v, w>`` over the boundary directions (first on ties)."""
    dirs = boundary_directions(cloud.n, directions, seed)
    scores = (cloud.values @ dirs.conj().T).real
    return [int(i) for i in np.argmax(scores, axis=0)]


def corner_scan(cloud, delta_min=None, epsilon=None, directions=None, workers=1, seed=0):
    """Cone-test the boundary candidates of ``cloud`` and keep the corners.

    Args:
        cloud (PointCloud): sampled range.
        delta_min (float): threshold in ``(0, 1]``.
        epsilon (float, optional): neighbourhood radius; adaptive when omitted,
            in which case every candidate sees at least ``MIN_CONE_NEIGHBOURS``
            non-coincident neighbours.
        directions (int, optional): number of boundary directions.
        workers (int): cone tests run in parallel on this many threads.
        seed (int): seed of the boundary directions for ``n >= 2``.

    Returns:
        list: :class:`CornerCertificate` with ``delta >= delta_min``, by ``delta`` descending.
    """
    delta_min = defaults.DELTA_MIN if delta_min is None else float(delta_min)
    if not 0 < delta_min <= 1:
        raise InvalidInputError(f"delta_min must lie in (0, 1], got {delta_min}")
    adaptive = epsilon is None
    eps = default_epsilon(cloud) if adaptive else float(epsilon)
    candidates = boundary_candidates(cloud, directions, seed)
    tester = ConeTester(cloud, eps, defaults.MIN_CONE_NEIGHBOURS if adaptive else None, thread_num=workers)
    certificates = tester.map(candidates)
    logger.info("%d distinct boundary candidates, epsilon %.3e", len(certificates), eps)
    corners = [c for c in certificates if c.delta >= delta_min]
    corners.sort(key=lambda c: -c.delta)
    logger.info("%d corners with delta >= %g", len(corners), delta_min)
    return corners


def certify_corner(T, cloud, u, epsilon=None, delta_min=None, seed=0, exterior_count=None):
    """Full certificate for ``u``: cone test, probe derivatives at the witness and eigen residuals.

    A certificate with ``delta >= delta_min`` and vanishing probes is a
    pseudocorner candidate, whose witness columns must then be eigenvectors.
    """
    T = ComplexMatrix.coerce(T)
    if cloud.fingerprint != T.fingerprint:
        raise ContractViolationError(f"cloud of matrix {cloud.fingerprint} used with matrix {T.fingerprint}")
    if not isinstance(u, RangePoint):
        raise InvalidInputError("certify_corner needs a RangePoint with its witness frame")
    if not u.is_consistent(T):
        raise ContractViolationError(f"witness does not realize the point (error {u.witness_error(T):.3e})")
    delta_min = defaults.DELTA_MIN if delta_min is None else float(delta_min)
    adaptive = epsilon is None
    eps = default_epsilon(cloud) if adaptive else float(epsilon)
    w, delta, radius, count = cone_test(cloud, u, eps, defaults.MIN_CONE_NEIGHBOURS if adaptive else None)
    report = probe_derivatives(T, u.witness, exterior_count=exterior_count, seed=seed)
    residuals = [eigen_residual(T, u.witness.column(j), u.value[j]) for j in range(u.n)]
    if delta < delta_min:
        logger.debug("candidate below delta_min: %.4f < %g", delta, delta_min)
    return CornerCertificate(
        point=u,
        direction=w,
        delta=delta,
        epsilon=radius,
        neighbor_count=count,
        probe_max_derivative=report.max_abs,
        eigen_residuals=residuals,
        fingerprint=cloud.fingerprint,
    )
