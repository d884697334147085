import numpy as np
import pytest

from src.potentials import build_circulant, potential_nearest
from src.spin_thermal import DensityMatrix


@pytest.fixture
def nearest():
    """Factory for nearest-neighbour potentials"""
    return potential_nearest


@pytest.fixture
def identity_potential():
    return build_circulant([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])


@pytest.fixture
def bell_state():
    """(|00> + |11>)/sqrt(2) as a two-spin density matrix"""
    vector = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    return DensityMatrix(np.outer(vector, vector), 2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
