import numpy as np
import pytest

from lagidx import TolerancePolicy


@pytest.fixture
def tol():
    return TolerancePolicy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
