import numpy as np
import pytest

from txham import ModelParams, enumerate_orientations


@pytest.fixture(scope="session")
def params():
    return ModelParams()


@pytest.fixture(scope="session")
def frames():
    return enumerate_orientations()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
