import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pairdecomp.core import PointSet

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def line_sets(draw, min_size=2, max_size=8, hi=60):
    """Distinct small integers on the line, as an exact PointSet."""
    vals = draw(st.lists(st.integers(0, hi), min_size=min_size, max_size=max_size, unique=True))
    return PointSet.line(vals)


eps_values = st.sampled_from(["1/4", "1/2", "1", "2", "3/4"])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
