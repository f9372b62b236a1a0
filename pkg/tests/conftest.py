import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from genburgers.model import ProblemSpec
from genburgers.validation import random_spec

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def specs(draw, max_n=3, max_breaks=6):
    """Random piecewise-affine problem data (seeded generator behind a hypothesis integer)."""
    seed = draw(st.integers(0, 2**32 - 1))
    return random_spec(np.random.default_rng(seed), max_n, max_breaks)


@pytest.fixture
def unit_box():
    return ProblemSpec.box([1.0], [1.0], 1.0)


@pytest.fixture
def heat_box():
    # sigma vanishes identically, so the viscous solution is a Gaussian average
    return ProblemSpec.box([1.0, 1.0], [1.0, -1.0], 1.0)
