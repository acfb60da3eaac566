import numpy as np
import pytest
from hypothesis import settings

from gpcasimir import PhysicalParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def params():
    return PhysicalParams(m=1.0, lam=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
