import numpy as np
import pytest

from sasakicheck import Embedding, standard_sasakian
from sasakicheck.sampling import sample_points, sample_vectors, spawn_rngs


@pytest.fixture(scope="session")
def sasaki3():
    return standard_sasakian(1)


@pytest.fixture(scope="session")
def sasaki5():
    return standard_sasakian(2)


@pytest.fixture(scope="session")
def rngs():
    return spawn_rngs(7)


@pytest.fixture()
def plane_r3(sasaki3):
    return Embedding(2, sasaki3, lambda c: [c[0], c[1], 0.1])


@pytest.fixture()
def quadric_r3(sasaki3):
    return Embedding(2, sasaki3, lambda c: [c[0], c[1], (c[0] ** 2 + c[1] ** 2) / 2])


@pytest.fixture()
def plane_r5(sasaki5):
    return Embedding(4, sasaki5, lambda c: [c[0], c[1], c[2], c[3], 0.1])


def chart_points(dim, count, seed=7):
    rng = np.random.default_rng(seed)
    return sample_points(dim, count, (-1.0, 1.0), rng)


def chart_vectors(dim, count, seed=11):
    rng = np.random.default_rng(seed)
    return sample_vectors(dim, count, rng)
