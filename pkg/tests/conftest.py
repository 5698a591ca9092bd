import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "frustra",
    deadline=None,
    max_examples=25,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("frustra")


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
