import numpy as np
import pytest

from rossby_lab.fields import Grid2


@pytest.fixture
def grid32():
    return Grid2(n=32, length=2.0 * np.pi)


@pytest.fixture
def grid64():
    return Grid2(n=64, length=2.0 * np.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
