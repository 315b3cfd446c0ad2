import numpy as np
import pytest

from numrange import ComplexMatrix
from numrange.config import as_config
from numrange.frames import haar_frame
from numrange.numerics import unitary_conjugate
from numrange.verify import (
    CORROBORATED,
    FAIL,
    INCONCLUSIVE,
    LOW_CONFIDENCE,
    PASS,
    check_emptiness,
    check_theorem_1_1,
    check_theorem_1_2,
    property_suite,
)

from .conftest import JORDAN, random_matrix


def harmonic(d):
    return ComplexMatrix.diagonal([1 / k for k in range(1, d + 1)])


def test_real_segment_corners_are_eigenvalues(small_config):
    report = check_theorem_1_1(ComplexMatrix.diagonal([0, 1, 3]), n=1, config=small_config)
    assert report.status == PASS
    corroborated = [e for e in report.entries if e["classification"] == CORROBORATED]
    points = sorted(e["certificate"]["point"]["value"][0][0] for e in corroborated)
    assert points == pytest.approx([0, 3], abs=1e-12)
    assert report.max_residual <= 1e-8


def test_triangle_corners_are_eigenvalues(small_config):
    T = ComplexMatrix.diagonal([1j, 1, -1])
    report = check_theorem_1_1(T, n=1, config=small_config)
    assert report.status == PASS and report.passed
    corroborated = [e for e in report.entries if e["classification"] == CORROBORATED]
    values = {complex(*e["certificate"]["point"]["value"][0]) for e in corroborated}
    assert len(corroborated) == 3
    for lam in (1j, 1, -1):
        assert min(abs(v - lam) for v in values) <= 1e-9
    assert all(e["residual"] <= 1e-6 for e in corroborated)


def test_disk_passes_vacuously(small_config):
    report = check_theorem_1_1(ComplexMatrix(JORDAN), n=1, config=small_config)
    assert report.status == PASS
    assert report.instances == 0 and report.failures == []


@pytest.mark.acceptance
@pytest.mark.parametrize("matrix_seed", range(50))
def test_normal_matrices_on_a_circle(matrix_seed, small_config):
    rng = np.random.default_rng(matrix_seed)
    d = int(rng.integers(3, 9))
    spectrum = np.exp(1j * np.sort(rng.uniform(0, 2 * np.pi, d)))
    T = unitary_conjugate(ComplexMatrix.diagonal(spectrum), haar_frame(d, d, matrix_seed).columns)
    report = check_theorem_1_1(T, n=1, config=small_config)
    assert report.failures == []
    for entry in report.entries:
        if entry["certificate"]["delta"] >= 0.5 and entry["classification"] == CORROBORATED:
            assert entry["residual"] <= 1e-6 * T.norm
            assert entry["certificate"]["probe_max_derivative"] <= 1e-6 * T.norm


def test_two_dimensional_vertices_of_a_diagonal_matrix(small_config):
    lam = [0, 1, 3, 7]
    config = as_config(small_config, directions=64, delta_min=0.3)
    report = check_theorem_1_1(ComplexMatrix.diagonal(lam), n=2, config=config)
    assert report.status == PASS
    vertices = {(a, b) for a in lam for b in lam if a != b}
    found = set()
    for entry in report.entries:
        assert entry["classification"] in (CORROBORATED, LOW_CONFIDENCE)
        if entry["classification"] == CORROBORATED:
            value = np.array(entry["certificate"]["point"]["value"])[:, 0]
            nearest = min(vertices, key=lambda v: np.hypot(*(value - v)))
            assert np.allclose(value, nearest, atol=1e-6)
            assert entry["certificate"]["delta"] >= 0.3
            assert entry["residual"] <= 1e-6
            found.add(nearest)
    assert {(7, 3), (3, 7), (7, 0), (0, 7)} <= found


def test_sparse_sampling_is_inconclusive(small_config):
    config = as_config(small_config, epsilon=1e-12)
    report = check_theorem_1_1(ComplexMatrix.diagonal([0, 1, 3]), n=1, config=config)
    assert report.status == INCONCLUSIVE
    assert report.detail


def test_harmonic_family_approaches_zero(small_config):
    family = [harmonic(d) for d in (10, 30, 100)]
    report = check_theorem_1_2(family, [0], config=small_config)
    assert report.status == PASS
    sigmas = [e["sigma_min"][0] for e in report.entries]
    assert sigmas == pytest.approx([0.1, 1 / 30, 0.01], rel=1e-9)
    assert all(e["delta"] >= 0.5 for e in report.entries)
    assert report.to_dict()["max_sigma_min"] == pytest.approx(0.1)


def test_exact_eigenvalue_along_the_family(small_config):
    report = check_theorem_1_2([harmonic(d) for d in (10, 30)], [1], config=small_config)
    assert report.status == PASS
    assert all(e["sigma_min"][0] <= 1e-7 for e in report.entries)


def test_unitary_invariance_of_sigma_min(small_config):
    family = [unitary_conjugate(harmonic(d), haar_frame(d, d, d).columns) for d in (10, 30)]
    report = check_theorem_1_2(family, [0], config=small_config)
    sigmas = [e["sigma_min"][0] for e in report.entries]
    assert sigmas == pytest.approx([0.1, 1 / 30], rel=1e-6)


def test_interior_target_fails(small_config):
    report = check_theorem_1_2([harmonic(d) for d in (10, 30)], [0.45], config=small_config)
    assert report.status == FAIL
    assert any(f["certificate"] == "sigma_min" for f in report.failures)


def test_emptiness_check(segment, small_config):
    assert check_emptiness(segment, 3, small_config).passed


def test_suite_on_an_empty_range(segment, small_config):
    report = property_suite(segment, n=3, config=small_config)
    assert report.passed
    assert report.check("E0").passed and not report.check("E0").skipped
    assert all(report.check(name).skipped for name in ("E1", "E2", "E3"))


@pytest.mark.parametrize("n", [1, 2])
def test_suite_on_the_identity(n, small_config):
    report = property_suite(ComplexMatrix.identity(4), n=n, config=small_config)
    assert report.passed, report.to_dict()


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize(
    "T",
    [
        ComplexMatrix.diagonal([0, 1]),
        ComplexMatrix.diagonal([0, 1, 3]),
        ComplexMatrix(JORDAN),
    ],
    ids=["segment", "three-points", "jordan"],
)
def test_suite_on_small_matrices(T, n, small_config):
    report = property_suite(T, n=n, config=small_config)
    assert report.passed, report.to_dict()


@pytest.mark.acceptance
@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("matrix_seed", [7, 8, 9])
def test_suite_on_a_random_matrix(matrix_seed, n, small_config):
    report = property_suite(random_matrix(6, matrix_seed), n=n, seed=matrix_seed, config=small_config)
    assert report.passed, report.to_dict()
    assert [c.name for c in report.checks] == ["E0", "E1", "E2", "E3"]
    assert report.to_dict()["config"]["seed"] == matrix_seed


def test_suite_is_deterministic(small_config):
    T = random_matrix(3, 1)
    a = property_suite(T, n=2, config=small_config).to_dict()
    b = property_suite(T, n=2, config=small_config).to_dict()
    assert a == b
