import math
from dataclasses import replace

import numpy as np
import pytest

from numrange import ComplexMatrix
from numrange.corners import (
    CornerCertificate,
    certify_corner,
    cone_test,
    corner_scan,
    default_epsilon,
    distinct_points,
)
from numrange.errors import ContractViolationError, InsufficientSamplingError, InvalidInputError
from numrange.frames import Frame
from numrange.ranges import PointCloud, RangePoint, augment_cloud, sample_cloud

from .conftest import random_matrix


@pytest.fixture(scope="module")
def segment_cloud():
    return sample_cloud(ComplexMatrix.diagonal([0, 1]), 1, 10_000, seed=0)


def test_segment_endpoint_is_a_sharp_corner(segment_cloud):
    w, delta, radius, count = cone_test(segment_cloud, [1.0], 0.05)
    assert delta == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(w, [-1.0], atol=1e-6)
    assert radius == 0.05 and count > 0


def test_segment_interior_is_not_a_corner(segment_cloud):
    _, delta, _, _ = cone_test(segment_cloud, [0.5], 0.05)
    assert delta <= 1e-9


def test_smooth_boundary_has_a_small_cone_constant(jordan):
    cloud = sample_cloud(jordan, 1, 100_000, seed=3)
    u = 0.5 * np.exp(0.7j)
    _, delta, _, _ = cone_test(cloud, [u], 0.05)
    assert delta <= 0.2


def test_no_neighbours_means_insufficient_sampling(segment_cloud):
    with pytest.raises(InsufficientSamplingError):
        cone_test(segment_cloud, [5.0], 0.01)
    with pytest.raises(ContractViolationError):
        cone_test(segment_cloud, [0.5], 0.0)


def test_singleton_cloud_is_a_corner_by_convention():
    cloud = sample_cloud(ComplexMatrix.identity(3), 2, 40, seed=1)
    assert len(distinct_points(cloud)) == 1
    assert default_epsilon(cloud) == 1.0
    w, delta, _, count = cone_test(cloud, [1, 1], 0.1)
    np.testing.assert_array_equal(w, [1, 0])
    assert (delta, count) == (1.0, 0)
    corners = corner_scan(cloud, delta_min=0.5)
    assert len(corners) == 1
    np.testing.assert_allclose(corners[0].point.value, [1, 1], atol=1e-12)
    assert corners[0].delta == 1.0


def test_segment_has_exactly_two_corners(segment_cloud):
    corners = corner_scan(segment_cloud, delta_min=0.5)
    assert len(corners) == 2
    ends = sorted(c.point.value[0].real for c in corners)
    assert ends[0] == pytest.approx(0, abs=2e-2)
    assert ends[1] == pytest.approx(1, abs=2e-2)
    for corner in corners:
        assert corner.neighbor_count >= 8
        assert corner.delta >= 0.5


def test_disk_has_no_corners(jordan):
    cloud = sample_cloud(jordan, 1, 20_000, seed=4)
    assert corner_scan(cloud, delta_min=0.5) == []


def test_scan_is_independent_of_workers(segment_cloud):
    a = corner_scan(segment_cloud, delta_min=0.5, workers=1)
    b = corner_scan(segment_cloud, delta_min=0.5, workers=4)
    assert [c.to_dict() for c in a] == [c.to_dict() for c in b]


def test_scan_rejects_bad_threshold(segment_cloud):
    with pytest.raises(InvalidInputError):
        corner_scan(segment_cloud, delta_min=0.0)
    with pytest.raises(InvalidInputError):
        corner_scan(segment_cloud, delta_min=1.5)


def test_certificate_at_a_two_dimensional_vertex(segment):
    cloud = sample_cloud(segment, 2, 2000, seed=2)
    u = RangePoint.from_witness(segment, Frame.standard(2, [0, 1]))
    certificate = certify_corner(segment, cloud, u, delta_min=0.5)
    assert certificate.delta == pytest.approx(1.0, abs=1e-9)
    assert certificate.probe_max_derivative <= 1e-10
    assert certificate.eigen_residuals == [0.0, 0.0]
    assert certificate.is_certified


def test_certificate_on_the_smooth_boundary(jordan):
    cloud = sample_cloud(jordan, 1, 20_000, seed=5)
    e = Frame(np.array([1, 1]) / math.sqrt(2))
    u = RangePoint.from_witness(jordan, e)
    certificate = certify_corner(jordan, cloud, u, epsilon=0.05)
    assert certificate.delta < 0.5
    assert certificate.probe_max_derivative >= 1 - 1e-12
    assert certificate.eigen_residuals[0] == pytest.approx(0.5)


def test_identity_witness_is_always_an_eigenvector():
    T = ComplexMatrix.identity(2)
    cloud = sample_cloud(T, 1, 100, seed=0)
    u = cloud.point(17)
    certificate = certify_corner(T, cloud, u)
    assert max(certificate.eigen_residuals) <= 1e-15


def test_certify_checks_its_inputs(segment, jordan):
    cloud = sample_cloud(segment, 1, 100, seed=0)
    with pytest.raises(ContractViolationError):
        certify_corner(jordan, cloud, cloud.point(0))
    with pytest.raises(InvalidInputError):
        certify_corner(segment, cloud, [0.5])
    bogus = RangePoint([0.9], Frame.standard(2, [0]))
    with pytest.raises(ContractViolationError):
        certify_corner(segment, cloud, bogus)


def test_certificates_survive_serialization_and_revalidate(segment):
    cloud = augment_cloud(segment, sample_cloud(segment, 1, 3000, seed=6), 8)
    corners = corner_scan(cloud, delta_min=0.5)
    assert corners
    for corner in corners:
        certificate = certify_corner(segment, cloud, corner.point)
        again = CornerCertificate.from_dict(certificate.to_dict())
        assert again.to_dict() == certificate.to_dict()
        assert again.revalidate(cloud, segment) == []


def test_revalidate_reports_a_forged_certificate(segment_cloud):
    corner = corner_scan(segment_cloud, delta_min=0.5)[0]
    data = corner.to_dict()
    data["delta"] = 1.5
    data["direction"] = [[0.0, 2.0]]
    problems = CornerCertificate.from_dict(data).revalidate(segment_cloud)
    assert any("unit" in p for p in problems)
    assert any("cone inequality" in p for p in problems)


@pytest.mark.parametrize("c", [0.25, 7.5, 8.0])
def test_certificates_are_scale_equivariant(c):
    T = random_matrix(4, 3)
    cloud = sample_cloud(T, 1, 3000, seed=9)
    u = cloud.point(int(np.argmax(cloud.values[:, 0].real)))
    scaled = T.scaled(c)
    scaled_cloud = PointCloud(c * cloud.values, cloud.witnesses, replace(cloud.meta, fingerprint=scaled.fingerprint))
    base = certify_corner(T, cloud, u, seed=4)
    again = certify_corner(scaled, scaled_cloud, RangePoint(c * u.value, u.witness), seed=4)
    assert again.delta == pytest.approx(base.delta, abs=1e-9)
    np.testing.assert_allclose(again.direction, base.direction, atol=1e-9)
    assert again.neighbor_count == base.neighbor_count
    assert again.epsilon == pytest.approx(c * base.epsilon, rel=1e-12)
    assert min(base.eigen_residuals) > 1e-3
    assert again.eigen_residuals == pytest.approx([c * r for r in base.eigen_residuals], rel=1e-9)
    assert again.probe_max_derivative == pytest.approx(c * base.probe_max_derivative, rel=1e-9)
