import numpy as np
import pytest

from tritospec.toeplitz import TriToeplitz


def complex_normal(rng, size=None):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_toeplitz(rng, n, normal=False):
    s, d, t = complex_normal(rng, 3)
    if normal:
        t = abs(s) * t / abs(t)
    return TriToeplitz(n, s, d, t)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
