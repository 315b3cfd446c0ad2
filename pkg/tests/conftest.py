import numpy as np
import pytest

from numrange import ComplexMatrix, RunConfig

JORDAN = [[0, 1], [0, 0]]


def random_matrix(d, seed):
    rng = np.random.default_rng(seed)
    return ComplexMatrix(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


def random_hermitian(d, seed):
    A = random_matrix(d, seed).entries
    return ComplexMatrix((A + A.conj().T) / 2)


@pytest.fixture
def jordan():
    return ComplexMatrix(JORDAN)


@pytest.fixture
def segment():
    return ComplexMatrix.diagonal([0, 1])


@pytest.fixture
def small_config():
    """Desk-scale parameters that keep the slower checks under a few seconds."""
    return RunConfig(
        samples=2000,
        restarts=3,
        directions=32,
        suite_directions=4,
        suite_compressions=3,
    )
