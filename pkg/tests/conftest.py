import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from photonwm.fieldcore import KGrid3

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def grid8():
    return KGrid3((8, 8, 8), (0.7, 0.7, 0.7))


@pytest.fixture(scope="session")
def grid16():
    return KGrid3((16, 16, 16), (0.5, 0.5, 0.5))
