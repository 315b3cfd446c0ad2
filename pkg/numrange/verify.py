"""Falsifiable checks of the corner theorems and of the elementary properties of W_n(T).

* corners of ``W_n(T)`` whose witness passes the first-order probes must have
  eigenvector witnesses, ``T e_j = lambda_j e_j``;
* a corner of the closure approached by compressions of growing dimension is
  an approximate eigenvalue, ``sigma_min(T_d - lambda_j) -> 0``;
* ``W_n(T)`` is empty when ``n > d``, invariant under coordinate
  permutations, grows under dilation (contains the range of every
  compression) and projects onto ``W_k(T)``.

Checks report detector noise as low confidence instead of as a violation.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .config import as_config
from .corners import certify_corner, corner_scan, cone_test, default_epsilon
from .errors import DimensionError, InsufficientSamplingError, InvalidInputError
from .frames import Frame, check_size, complex_gaussian, derive_seed, haar_frame, make_rng
from .numerics import ComplexMatrix, eigen_residual, min_singular_value
from .probes import invariance_residuals
from .ranges import (
    CloudMeta,
    PointCloud,
    augment_cloud,
    cloud_support,
    compress,
    project_cloud,
    sample_cloud,
    support_exact_1d,
    support_stiefel,
    tau,
)
from .ranges.point import complex_pairs, real_embedding

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

CORROBORATED = "corroborated"
LOW_CONFIDENCE = "low-confidence"
VIOLATION_CANDIDATE = "violation-candidate"

E1_STREAM, E2_STREAM, E3_STREAM = 0xE1, 0xE2, 0xE3


@dataclass
class TheoremReport:
    """Outcome of one theorem check.

    Attributes:
        theorem (str): ``"1.1"`` (corner witnesses are eigenvectors) or ``"1.2"``
            (corners of the closure are approximate eigenvalues).
        instances (int): certificates or family members examined.
        max_residual (float): largest eigen residual seen.
        max_sigma_min (float or None): largest ``sigma_min`` over the family (``"1.2"`` only).
        failures (list): ``{"fingerprint", "certificate", "observed"}`` records.
        status (str): ``pass``, ``fail`` or ``inconclusive``.
        entries (list): per-certificate or per-member rows.
        fingerprint (str): matrix fingerprint (last family member for ``"1.2"``).
        config (dict): the run configuration.
        detail (str): reason of an inconclusive run.
    """

    theorem: str
    instances: int = 0
    max_residual: float = 0.0
    max_sigma_min: float = None
    failures: list = field(default_factory=list)
    status: str = PASS
    entries: list = field(default_factory=list)
    fingerprint: str = ""
    config: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "status": self.status,
            "passed": self.passed,
            "fingerprint": self.fingerprint,
            "instances": self.instances,
            "max_residual": self.max_residual,
            "max_sigma_min": self.max_sigma_min,
            "failures": self.failures,
            "entries": self.entries,
            "detail": self.detail,
            "config": self.config,
        }


def build_cloud(T, n, config, seed=None):
    """Haar cloud, sharpened by support maximizers when ``config.refine``."""
    seed = config.seed if seed is None else seed
    cloud = sample_cloud(T, n, config.samples, seed=seed, workers=config.workers)
    if config.refine:
        cloud = augment_cloud(T, cloud, config.directions, config.restarts, seed=seed, workers=config.workers)
    return cloud


def classify_certificate(T, certificate, config):
    """Return ``(label, residual, tolerance)`` for a full certificate.

    A certificate whose probes do not vanish, or whose cone constant is below
    ``delta_min``, is low confidence. Otherwise the witness must be an
    eigen-frame within ``EIGEN_RESIDUAL_RTOL * ||T|| * (1 + slack)`` where the
    slack is the relative probe magnitude.
    """
    scale = T.norm
    residual = max(certificate.eigen_residuals, default=0.0)
    slack = certificate.probe_max_derivative / scale if scale > 0 else 0.0
    tolerance = config.tolerance("EIGEN_RESIDUAL_RTOL") * scale * (1.0 + slack)
    probes_vanish = certificate.probe_max_derivative <= config.tolerance("PROBE_RTOL") * scale
    if certificate.delta < config.delta_min or not probes_vanish:
        return LOW_CONFIDENCE, residual, tolerance
    if residual <= tolerance:
        return CORROBORATED, residual, tolerance
    return VIOLATION_CANDIDATE, residual, tolerance


def check_theorem_1_1(T, n=None, config=None):
    """Certify the corners of a sampled ``W_n(T)`` and check that their witnesses are eigen-frames.

    Insufficient sampling makes the report inconclusive, never failed.
    """
    config = as_config(config) if n is None else as_config(config, n=int(n))
    T = ComplexMatrix.coerce(T)
    n = config.n
    check_size(T.d, n)
    report = TheoremReport(theorem="1.1", fingerprint=T.fingerprint, config=config.dict())
    with config.applied_tolerances():
        cloud = build_cloud(T, n, config)
        try:
            corners = corner_scan(
                cloud, config.delta_min, config.epsilon, config.directions, workers=config.workers, seed=config.seed
            )
            certificates = [
                certify_corner(
                    T,
                    cloud,
                    corner.point,
                    config.epsilon,
                    config.delta_min,
                    seed=derive_seed(config.seed, i),
                    exterior_count=config.exterior_count,
                )
                for i, corner in enumerate(corners)
            ]
        except InsufficientSamplingError as e:
            logger.warning("theorem 1.1 check inconclusive: %s", e)
            report.status = INCONCLUSIVE
            report.detail = str(e)
            return report
        for certificate in certificates:
            label, residual, tolerance = classify_certificate(T, certificate, config)
            report.entries.append(
                {
                    "classification": label,
                    "residual": residual,
                    "tolerance": tolerance,
                    "certificate": certificate.to_dict(),
                }
            )
            report.max_residual = max(report.max_residual, residual)
            if label == VIOLATION_CANDIDATE:
                report.failures.append(
                    {"fingerprint": T.fingerprint, "certificate": certificate.to_dict(), "observed": residual}
                )
    report.instances = len(certificates)
    report.status = PASS if report.passed else FAIL
    logger.info(
        "theorem 1.1: %d certificates, %d failures, max residual %.3e",
        report.instances,
        len(report.failures),
        report.max_residual,
    )
    return report


def check_theorem_1_2(family, target, n=None, config=None):
    """Follow ``sigma_min(T_d - lambda_j)`` along a family of growing dimension.

    Passes when the last ``sigma_min`` is at most ``SIGMA_MIN_TARGET``, the
    sequence never increases beyond ``sqrt(eps) * ||T||`` noise, and the cloud
    point nearest ``target`` in every member has cone constant ``>= delta_min``.

    Args:
        family (list of ComplexMatrix): matrices of growing dimension.
        target: the corner ``lambda`` in ``C^n``.
        n (int, optional): range dimension, defaults to ``len(target)``.
        config (RunConfig or dict, optional): run parameters.
    """
    family = [ComplexMatrix.coerce(T) for T in family]
    if not family:
        raise InvalidInputError("the family holds at least one matrix")
    lam = np.asarray(target, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(lam)):
        raise InvalidInputError("target must be finite")
    config = as_config(config, n=int(n) if n is not None else lam.shape[0])
    n = config.n
    if lam.shape[0] != n:
        raise DimensionError(f"target in C^{lam.shape[0]} for W_{n}")
    dims = [T.d for T in family]
    if dims != sorted(dims):
        logger.warning("family dimensions %s are not increasing", dims)

    report = TheoremReport(theorem="1.2", fingerprint=family[-1].fingerprint, config=config.dict())
    report.instances = len(family)
    sigmas = []
    with config.applied_tolerances():
        for i, T in enumerate(family):
            check_size(T.d, n)
            sigma = [min_singular_value(T, z) for z in lam]
            sigmas.append(max(sigma))
            cloud = build_cloud(T, n, config, seed=derive_seed(config.seed, i))
            distance, idx = cloud.tree.query(real_embedding(lam))
            point = cloud.point(int(idx))
            adaptive = config.epsilon is None
            eps = default_epsilon(cloud) if adaptive else config.epsilon
            try:
                _, delta, _, _ = cone_test(cloud, point, eps, defaults.MIN_CONE_NEIGHBOURS if adaptive else None)
            except InsufficientSamplingError as e:
                logger.warning("theorem 1.2 check inconclusive at d=%d: %s", T.d, e)
                report.status = INCONCLUSIVE
                report.detail = str(e)
                return report
            residuals = [eigen_residual(T, point.witness.column(j), point.value[j]) for j in range(n)]
            report.max_residual = max(report.max_residual, max(residuals))
            report.entries.append(
                {
                    "d": T.d,
                    "fingerprint": T.fingerprint,
                    "sigma_min": sigma,
                    "nearest_point": complex_pairs(point.value),
                    "distance": float(distance),
                    "delta": delta,
                    "eigen_residuals": residuals,
                    "span_distances": invariance_residuals(T, point.witness)["span_distances"],
                }
            )
            logger.info("d=%d: sigma_min %.6g, delta %.4f", T.d, sigmas[-1], delta)
            if delta < config.delta_min:
                report.failures.append({"fingerprint": T.fingerprint, "certificate": "cone", "observed": delta})

    noise = math.sqrt(np.finfo(float).eps)
    for i in range(1, len(family)):
        scale = max(1.0, family[i - 1].norm, family[i].norm)
        if sigmas[i] > sigmas[i - 1] + noise * scale:
            report.failures.append(
                {"fingerprint": family[i].fingerprint, "certificate": "monotone", "observed": sigmas[i]}
            )
    target_sigma = config.tolerance("SIGMA_MIN_TARGET")
    if sigmas[-1] > target_sigma * (1 + 1e-9):
        report.failures.append(
            {"fingerprint": family[-1].fingerprint, "certificate": "sigma_min", "observed": sigmas[-1]}
        )
    report.max_sigma_min = max(sigmas)
    report.status = PASS if report.passed else FAIL
    return report


@dataclass
class PropertyCheck:
    name: str
    passed: bool
    detail: str = ""
    skipped: bool = False

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "skipped": self.skipped, "detail": self.detail}


@dataclass
class PropertyReport:
    """One :class:`PropertyCheck` per property; skipped checks never fail the report."""

    fingerprint: str
    n: int
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks if not c.skipped)

    def check(self, name):
        return next(c for c in self.checks if c.name == name)

    def to_dict(self):
        return {
            "fingerprint": self.fingerprint,
            "n": self.n,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "config": self.config,
        }


def _unit(rng, n):
    w = complex_gaussian(rng, n)
    return w / np.linalg.norm(w)


def check_emptiness(T, n, config):
    """Clouds with more coordinates than the dimension must be refused."""
    sizes = sorted({T.d + 1, n} - set(range(1, T.d + 1)))
    for m in sizes:
        try:
            sample_cloud(T, m, count=1, seed=config.seed)
        except DimensionError:
            continue
        return PropertyCheck("E0", False, f"a W_{m} cloud was built in dimension {T.d}")
    return PropertyCheck("E0", True, f"W_m refused for m in {sizes}")


def check_permutation_invariance(T, n, config):
    """Support values of the permuted range match the original ones."""
    rng = make_rng(derive_seed(config.seed, E1_STREAM))
    pi = rng.permutation(n)
    inv = np.argsort(pi)
    tol = config.tolerance("SYMMETRY_TOL") * max(1.0, T.norm)
    worst = 0.0
    for i in range(config.suite_directions):
        w = _unit(rng, n)
        seed = derive_seed(config.seed, E1_STREAM, i)
        a = support_stiefel(T, n, w, config.restarts, seed=seed, workers=config.workers)
        # sup Re<v[pi], w> over W_n(T) is the support of W_n(T) in direction w[inv]
        b = support_stiefel(
            T, n, w[inv], config.restarts, seed=seed, initial=[a.maximizer.permute(inv)], workers=config.workers
        )
        a = support_stiefel(T, n, w, 1, seed=seed, initial=[a.maximizer, b.maximizer.permute(pi)])
        worst = max(worst, abs(a.value - b.value))
    return PropertyCheck("E1", worst <= tol, f"permutation {pi.tolist()}: max support gap {worst:.3e} (tol {tol:.1e})")


def check_compression_inclusion(T, n, config):
    """The support of every compression is dominated by the support of ``T``."""
    rng = make_rng(derive_seed(config.seed, E2_STREAM))
    m = max(n, T.d - 1)
    tol = config.tolerance("SUPPORT_DOMINATION_TOL") * max(1.0, T.norm)
    worst = -math.inf
    for c in range(config.suite_compressions):
        outer = haar_frame(T.d, m, derive_seed(config.seed, E2_STREAM, c))
        T0 = compress(T, outer)
        w = _unit(rng, n)
        seed = derive_seed(config.seed, E2_STREAM, c, 1)
        inner = support_stiefel(T0, n, w, config.restarts, seed=seed, workers=config.workers)
        full = support_stiefel(
            T, n, w, config.restarts, seed=seed, initial=[inner.maximizer.embed(outer)], workers=config.workers
        )
        worst = max(worst, inner.value - full.value)
    return PropertyCheck(
        "E2",
        worst <= tol,
        f"{config.suite_compressions} compressions to dimension {m}: max excess {worst:.3e} (tol {tol:.1e})",
    )


def _coordinate_maximizers(T, n, count, rng):
    # W_n points whose first coordinate attains the W_1 support at 2 pi k / count
    frames = []
    for k in range(count):
        _, vector = support_exact_1d(T, 2 * math.pi * k / count)
        frames.append(Frame(vector.reshape(-1, 1)).complete(n, rng))
    values = np.array([tau(T, f) for f in frames])
    witnesses = np.array([f.columns for f in frames])
    return PointCloud(values, witnesses, CloudMeta(T.d, T.fingerprint, "support", 0, count))


def check_projection(T, n, config):
    """Projecting ``W_n(T)`` to its first ``k`` coordinates gives ``W_k(T)``."""
    rng = make_rng(derive_seed(config.seed, E3_STREAM))
    scale = max(1.0, T.norm)
    dominance = config.tolerance("SUPPORT_DOMINATION_TOL") * scale
    mc_tol = config.tolerance("PROJECTION_TOL") * scale
    cloud = sample_cloud(T, n, config.samples, seed=derive_seed(config.seed, E3_STREAM), workers=config.workers)
    problems = []
    notes = []
    for k in range(1, n):
        projected = project_cloud(cloud, k)
        errors = [projected.point(i).witness_error(T) for i in range(min(len(projected), 200))]
        if max(errors) > config.tolerance("WITNESS_RTOL") * scale:
            problems.append(f"k={k}: truncated witnesses off by {max(errors):.3e}")

        gap = 0.0
        for i in range(config.suite_directions):
            w = _unit(rng, k)
            seed = derive_seed(config.seed, E3_STREAM, k, i)
            low = support_stiefel(T, k, w, config.restarts, seed=seed, workers=config.workers)
            padded = np.concatenate([w, np.zeros(n - k)])
            start = low.maximizer.complete(n, rng)
            high = support_stiefel(T, n, padded, config.restarts, seed=seed, initial=[start], workers=config.workers)
            back = support_stiefel(T, k, w, 1, seed=seed, initial=[low.maximizer, high.maximizer.truncate(k)])
            gap = max(gap, abs(high.value - back.value), low.value - high.value)
        if gap > dominance:
            problems.append(f"k={k}: support of W_{n} along (w, 0) differs from W_{k} by {gap:.3e}")
        notes.append(f"k={k}: support gap {gap:.3e}")

        if k == 1:
            sharp = project_cloud(cloud.concat(_coordinate_maximizers(T, n, config.directions, rng)), 1)
            excess = 0.0
            deficit = 0.0
            for _ in range(config.suite_directions):
                theta = float(rng.uniform(0.0, 2 * math.pi))
                exact, _ = support_exact_1d(T, theta)
                mc, _ = cloud_support(sharp, [cmath.exp(1j * theta)])
                excess = max(excess, mc - exact)
                deficit = max(deficit, exact - mc)
            if excess > 1e-9 * scale:
                problems.append(f"projected cloud exceeds the W_1 support by {excess:.3e}")
            if T.d <= 4 and deficit > mc_tol:
                problems.append(f"projected cloud misses the W_1 support by {deficit:.3e}")
            notes.append(f"projected cloud deficit {deficit:.3e}")
    return PropertyCheck("E3", not problems, "; ".join(problems or notes))


def property_suite(T, n=None, seed=None, config=None):
    """Run the emptiness, permutation, compression and projection checks.

    Failures are report entries, never exceptions. When ``n > d`` only the
    emptiness check runs; the projection check needs ``n >= 2``.
    """
    overrides = {}
    if n is not None:
        overrides["n"] = int(n)
    if seed is not None:
        overrides["seed"] = int(seed)
    config = as_config(config, **overrides)
    T = ComplexMatrix.coerce(T)
    n = config.n
    report = PropertyReport(fingerprint=T.fingerprint, n=n, config=config.dict())
    with config.applied_tolerances():
        report.checks.append(check_emptiness(T, n, config))
        if n > T.d:
            for name in ("E1", "E2", "E3"):
                report.checks.append(PropertyCheck(name, True, f"W_{n} is empty in dimension {T.d}", skipped=True))
        else:
            report.checks.append(check_permutation_invariance(T, n, config))
            report.checks.append(check_compression_inclusion(T, n, config))
            if n >= 2:
                report.checks.append(check_projection(T, n, config))
            else:
                report.checks.append(PropertyCheck("E3", True, "nothing to project for n = 1", skipped=True))
    for check in report.checks:
        outcome = "skipped" if check.skipped else ("passed" if check.passed else "FAILED")
        logger.info("%s %s: %s", check.name, outcome, check.detail)
    return report
