import numpy as np
import pytest

from efgraff.expfam import Representation
from efgraff.function_space import SampleSpace


@pytest.fixture
def bernoulli():
    return Representation.from_arrays([0.0, 0.0], [[0.0, 1.0]])


@pytest.fixture
def uniform3():
    return Representation.from_arrays([0.0, 0.0, 0.0], [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


@pytest.fixture
def bernoulli3():
    """One-parameter family on three points that only moves mass on x1."""
    return Representation.from_arrays([0.0, 0.0, 0.0], [[0.0, 1.0, 0.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def space(k):
    return SampleSpace.of_size(k)
