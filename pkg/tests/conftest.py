import numpy as np
import pytest

from privclust.datagen import load_preset, make_paired


@pytest.fixture(scope="session")
def gaussian_d02():
    return make_paired(load_preset("gaussian-d02"))


@pytest.fixture(scope="session")
def pointwise_d02():
    return make_paired(load_preset("pointwise-d02"))


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


def two_blobs(n_per=20, sep=10.0, sigma=0.3, seed=0, d=2):
    """Two well-separated isotropic blobs with 0/1 truth labels."""
    gen = np.random.default_rng(seed)
    a = gen.normal(0.0, sigma, size=(n_per, d))
    b = gen.normal(0.0, sigma, size=(n_per, d)) + sep
    X = np.vstack([a, b])
    truth = np.array([0] * n_per + [1] * n_per)
    return X, truth
