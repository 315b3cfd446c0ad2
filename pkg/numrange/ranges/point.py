"""Points of W_n(T), sampled clouds, compressions and the elementary symmetries."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .. import defaults
from ..errors import DimensionError, InvalidInputError
from ..frames import Frame, check_permutation
from ..numerics import ComplexMatrix


def complex_pairs(values):
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=np.complex128).reshape(-1)]


def from_pairs(pairs):
    arr = np.asarray(pairs, dtype=np.float64).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


def real_embedding(values):
    """Map points of ``C^n`` (last axis) to ``R^{2n}``; ``Re<z, w>`` becomes the real dot product."""
    values = np.asarray(values, dtype=np.complex128)
    return np.concatenate([values.real, values.imag], axis=-1)


def from_real_embedding(x):
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1] // 2
    return x[..., :n] + 1j * x[..., n:]


def tau(T, frame):
    """``(<T e_1, e_1>, ..., <T e_n, e_n>)`` for the columns of ``frame``."""
    T = ComplexMatrix.coerce(T)
    if frame.d != T.d:
        raise DimensionError(f"frame lives in C^{frame.d}, matrix has dimension {T.d}")
    F = frame.columns
    return np.einsum("ij,ij->j", F.conj(), T.entries @ F)


def compress(T, frame):
    """Matrix ``F* T F`` of the compression to the frame span; entry ``(j, k)`` is ``<T e_k, e_j>``."""
    T = ComplexMatrix.coerce(T)
    if frame.d != T.d:
        raise DimensionError(f"frame lives in C^{frame.d}, matrix has dimension {T.d}")
    F = frame.columns
    return ComplexMatrix(F.conj().T @ T.entries @ F)


@dataclass(frozen=True, eq=False)
class RangePoint:
    """A point ``tau(T, e)`` together with its witness frame ``e``."""

    value: np.ndarray
    witness: Frame

    def __post_init__(self):
        value = np.array(self.value, dtype=np.complex128).reshape(-1)
        if value.shape[0] != self.witness.n:
            raise DimensionError(f"point in C^{value.shape[0]} with a {self.witness.n}-frame witness")
        value.setflags(write=False)
        object.__setattr__(self, "value", value)

    @classmethod
    def from_witness(cls, T, frame):
        return cls(tau(T, frame), frame)

    @property
    def n(self):
        return self.value.shape[0]

    def witness_error(self, T):
        """Largest ``|value_j - <T e_j, e_j>|``."""
        return float(np.max(np.abs(self.value - tau(T, self.witness))))

    def is_consistent(self, T, rtol=None):
        rtol = defaults.WITNESS_RTOL if rtol is None else rtol
        T = ComplexMatrix.coerce(T)
        return self.witness_error(T) <= rtol * max(T.norm, 1.0)

    def to_dict(self):
        return {"value": complex_pairs(self.value), "witness": [complex_pairs(c) for c in self.witness.columns.T]}

    @classmethod
    def from_dict(cls, data):
        columns = np.column_stack([from_pairs(c) for c in data["witness"]])
        return cls(from_pairs(data["value"]), Frame(columns))


def permute_point(point, pi):
    """Relabel coordinates: new coordinate ``i`` is old coordinate ``pi[i]``, witness columns likewise."""
    pi = check_permutation(pi, point.n)
    return RangePoint(point.value[pi], point.witness.permute(pi))


@dataclass(frozen=True)
class CloudMeta:
    d: int
    fingerprint: str
    sampler: str
    seed: int
    count: int

    def to_dict(self):
        return {
            "d": self.d,
            "fingerprint": self.fingerprint,
            "sampler": self.sampler,
            "seed": self.seed,
            "count": self.count,
        }


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Finite sample of ``W_n(T)``.

    Attributes:
        values (ndarray): ``(m, n)`` complex points.
        witnesses (ndarray): ``(m, d, n)`` witness frames, row ``i`` realizes ``values[i]``.
        meta (CloudMeta): matrix fingerprint and generation metadata.
    """

    values: np.ndarray
    witnesses: np.ndarray
    meta: CloudMeta

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        witnesses = np.array(self.witnesses, dtype=np.complex128)
        if values.ndim != 2 or witnesses.ndim != 3:
            raise InvalidInputError("cloud values must be (m, n) and witnesses (m, d, n)")
        m, n = values.shape
        if witnesses.shape != (m, self.meta.d, n):
            raise DimensionError(f"witness block of shape {witnesses.shape} does not match {(m, self.meta.d, n)}")
        if m < 1:
            raise InvalidInputError("a cloud holds at least one point")
        values.setflags(write=False)
        witnesses.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "witnesses", witnesses)
        if self.meta.count != m:
            object.__setattr__(self, "meta", replace(self.meta, count=m))

    @property
    def n(self):
        return self.values.shape[1]

    @property
    def d(self):
        return self.meta.d

    @property
    def fingerprint(self):
        return self.meta.fingerprint

    def __len__(self):
        return self.values.shape[0]

    def __iter__(self):
        for i in range(len(self)):
            yield self.point(i)

    def point(self, i):
        return RangePoint(self.values[i], Frame(self.witnesses[i]))

    @cached_property
    def embedded(self):
        return real_embedding(self.values)

    @cached_property
    def tree(self):
        return cKDTree(self.embedded)

    @cached_property
    def extent(self):
        """Largest point norm."""
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def coincidence_radius(self, rtol=None):
        rtol = defaults.COINCIDENCE_RTOL if rtol is None else rtol
        return rtol * self.extent

    def concat(self, other, sampler=None):
        if other.fingerprint != self.fingerprint or other.n != self.n:
            raise InvalidInputError("only clouds of the same matrix and range dimension can be merged")
        meta = replace(self.meta, sampler=sampler or self.meta.sampler)
        return PointCloud(
            np.concatenate([self.values, other.values]), np.concatenate([self.witnesses, other.witnesses]), meta
        )

    def to_dict(self, with_witnesses=True):
        out = {"n": self.n, "meta": self.meta.to_dict(), "points": []}
        for i in range(len(self)):
            entry = {"value": complex_pairs(self.values[i])}
            if with_witnesses:
                entry["witness"] = [complex_pairs(c) for c in self.witnesses[i].T]
            out["points"].append(entry)
        return out

    @classmethod
    def from_dict(cls, data):
        meta = CloudMeta(**data["meta"])
        values = np.array([from_pairs(p["value"]) for p in data["points"]])
        witnesses = np.array([np.column_stack([from_pairs(c) for c in p["witness"]]) for p in data["points"]])
        return cls(values.reshape(len(data["points"]), data["n"]), witnesses, meta)


def project_cloud(cloud, k):
    """Keep the first ``k`` coordinates of every point and the first ``k`` columns of every witness."""
    if not 1 <= k <= cloud.n:
        raise DimensionError(f"cannot project a W_{cloud.n} cloud to W_{k}")
    if k == cloud.n:
        return cloud
    meta = replace(cloud.meta, sampler=f"{cloud.meta.sampler}|project:{k}")
    return PointCloud(cloud.values[:, :k], cloud.witnesses[:, :, :k], meta)


def permute_cloud(cloud, pi):
    pi = check_permutation(pi, cloud.n)
    meta = replace(cloud.meta, sampler=f"{cloud.meta.sampler}|permute")
    return PointCloud(cloud.values[:, pi], cloud.witnesses[:, :, pi], meta)


def cloud_support(cloud, w):
    """Monte-Carlo support value ``max_v Re<v, w>`` and the index attaining it (first on ties)."""
    w = np.asarray(w, dtype=np.complex128).reshape(-1)
    if w.shape[0] != cloud.n:
        raise DimensionError(f"direction in C^{w.shape[0]} for a W_{cloud.n} cloud")
    scores = (cloud.values @ w.conj()).real
    idx = int(np.argmax(scores))
    return float(scores[idx]), idx


def leading_compressions(T, sizes):
    """Compressions of ``T`` onto ``span{e_1, ..., e_m}`` for each ``m`` in ``sizes``."""
    T = ComplexMatrix.coerce(T)
    family = []
    for m in sizes:
        m = int(m)
        if not 1 <= m <= T.d:
            raise DimensionError(f"cannot compress a {T.d}-dimensional matrix to dimension {m}")
        family.append(ComplexMatrix(T.entries[:m, :m]))
    return family
