import numpy as np
import pytest

from infoholonomy import get_model


@pytest.fixture(scope="session")
def models():
    return {name: get_model(name) for name in
            ("normal-1", "normal-2", "normal-3", "flat-toy", "bernoulli", "poisson", "gamma")}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
