import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def plus_minus():
    s = 1 / np.sqrt(2)
    return np.array([s, s]), np.array([s, -s])
