import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "opineq",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("opineq")


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)
