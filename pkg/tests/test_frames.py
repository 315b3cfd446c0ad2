import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from numrange.errors import ContractViolationError, DimensionError, InvalidInputError
from numrange.frames import (
    Frame,
    PathProbe,
    complement_basis,
    derive_seed,
    distance_to_span,
    exterior_mix_point,
    haar_block,
    haar_frame,
    make_rng,
    planar_rotation_point,
    probe_point,
    random_exterior_vector,
)

SQRT3_2 = math.sqrt(3) / 2


def test_frame_validation():
    with pytest.raises(DimensionError):
        Frame(np.eye(2, 3))
    with pytest.raises(ContractViolationError):
        Frame([[1, 1], [0, 1]])
    with pytest.raises(InvalidInputError):
        Frame(np.full((2, 1), np.nan))
    frame = Frame([1, 0])
    assert (frame.d, frame.n) == (2, 1)


def test_haar_frame_is_orthonormal_and_deterministic():
    frame = haar_frame(3, 2, 42)
    assert frame.gram_residual() <= 1e-10
    assert haar_frame(3, 2, 42) == frame
    assert haar_frame(3, 2, 43) != frame
    square = haar_frame(2, 2, 7)
    np.testing.assert_allclose(square.projector(), np.eye(2), atol=1e-12)
    with pytest.raises(DimensionError):
        haar_frame(2, 3, 0)


def test_haar_first_coordinate_is_uniform_on_average():
    rng = make_rng(2024)
    block = haar_block(4, 1, 100_000, rng)
    assert np.mean(np.abs(block[:, 0, 0]) ** 2) == pytest.approx(0.25, abs=0.01)
    gram = np.einsum("kij,kil->kjl", block.conj(), block)
    assert np.max(np.abs(gram - 1)) <= 1e-12


def test_derive_seed_is_stable_and_separates_streams():
    assert derive_seed(1, 2) == derive_seed(1, 2)
    assert derive_seed(1, 2) != derive_seed(1, 3)
    assert derive_seed(-1, 0) == derive_seed(2**64 - 1, 0)


def test_exterior_mix_examples():
    frame = Frame.standard(2, [0])
    probe = PathProbe.exterior(0, [0, 1])
    assert exterior_mix_point(frame, probe, 0.0) is frame
    moved = exterior_mix_point(frame, probe, 0.5)
    np.testing.assert_allclose(moved.column(0), [SQRT3_2, 0.5])
    with pytest.raises(ContractViolationError):
        exterior_mix_point(frame, probe, 0.6)
    with pytest.raises(ContractViolationError):
        exterior_mix_point(frame, PathProbe.exterior(0, [1, 0]), 0.1)
    with pytest.raises(ContractViolationError):
        PathProbe.exterior(0, [0, 2])


def test_planar_rotation_examples():
    frame = Frame.standard(2, [0, 1])
    probe = PathProbe.planar(0, 1, 0.0)
    moved = planar_rotation_point(frame, probe, 0.5)
    np.testing.assert_allclose(moved.columns, [[SQRT3_2, -0.5], [0.5, SQRT3_2]])
    assert planar_rotation_point(frame, probe, 0.0) is frame
    with pytest.raises(InvalidInputError):
        PathProbe.planar(1, 1)
    with pytest.raises(DimensionError):
        planar_rotation_point(Frame.standard(2, [0]), probe, 0.1)


@seed(17)
@settings(max_examples=50, deadline=None)
@given(
    d=st.integers(2, 6),
    frame_seed=st.integers(0, 2**32),
    t=st.floats(-0.5, 0.5),
    alpha=st.floats(0, 2 * math.pi),
)
def test_paths_stay_on_the_stiefel_manifold(d, frame_seed, t, alpha):
    rng = make_rng(frame_seed)
    n = int(rng.integers(1, d))
    frame = haar_frame(d, n, frame_seed)
    u = random_exterior_vector(frame, rng)
    j = int(rng.integers(0, n))
    assert probe_point(frame, PathProbe.exterior(j, u), t).gram_residual() <= 1e-12
    if n >= 2:
        k = (j + 1) % n
        rotated = probe_point(frame, PathProbe.planar(j, k, alpha), t)
        assert rotated.gram_residual() <= 1e-12
        assert np.linalg.norm(rotated.projector() - frame.projector()) <= 1e-12


def test_paths_have_bounded_second_differences():
    frame = haar_frame(4, 2, 3)
    rng = make_rng(3)
    probes = [PathProbe.exterior(0, random_exterior_vector(frame, rng)), PathProbe.planar(0, 1, 1.0)]
    h = 1e-3
    for probe in probes:
        for t in np.linspace(-0.49, 0.49, 15):
            second = (
                probe_point(frame, probe, t + h).columns
                - 2 * probe_point(frame, probe, t).columns
                + probe_point(frame, probe, t - h).columns
            ) / h**2
            assert np.max(np.abs(second)) <= 10


def test_distance_to_span_examples():
    e1 = Frame.standard(2, [0])
    assert distance_to_span([0, 1], e1) == 1.0
    assert distance_to_span([1, 0], e1) == 0.0
    assert distance_to_span(np.array([1, 1]) / math.sqrt(2), e1) == pytest.approx(1 / math.sqrt(2))
    frame = haar_frame(5, 3, 9)
    x = frame.columns @ np.array([1, -2j, 0.5])
    assert distance_to_span(x, frame) <= 1e-10 * np.linalg.norm(x)
    with pytest.raises(DimensionError):
        distance_to_span([1, 0, 0], e1)


def test_complement_and_exterior_vectors():
    frame = haar_frame(5, 2, 1)
    basis = complement_basis(frame)
    assert basis.shape == (5, 3)
    np.testing.assert_allclose(basis.conj().T @ basis, np.eye(3), atol=1e-12)
    assert np.max(np.abs(frame.columns.conj().T @ basis)) <= 1e-12
    u = random_exterior_vector(frame, make_rng(0))
    assert np.linalg.norm(u) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        random_exterior_vector(haar_frame(2, 2, 0), make_rng(0))


def test_frame_algebra():
    frame = haar_frame(4, 3, 5)
    assert frame.truncate(2).n == 2
    np.testing.assert_array_equal(frame.permute([2, 0, 1]).columns, frame.columns[:, [2, 0, 1]])
    with pytest.raises(InvalidInputError):
        frame.permute([0, 0, 1])
    completed = frame.truncate(1).complete(3, make_rng(1))
    assert completed.n == 3 and completed.gram_residual() <= 1e-10
    np.testing.assert_array_equal(completed.column(0), frame.column(0))
    outer = haar_frame(6, 4, 2)
    lifted = frame.embed(outer)
    assert (lifted.d, lifted.n) == (6, 3)
    assert lifted.gram_residual() <= 1e-10
