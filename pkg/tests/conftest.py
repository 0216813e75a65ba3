import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from covkit.geometry import convex_hull

settings.register_profile(
    "covkit",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("covkit")

coord = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def polygons(draw, min_points=4, max_points=20):
    """Random convex polygons: hulls of seeded uniform points."""
    m = draw(st.integers(min_points, max_points))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    while True:
        try:
            return convex_hull(rng.uniform(-1, 1, (m, 2)))
        except Exception:
            continue


@st.composite
def directions(draw):
    a = draw(st.floats(0.0, 2 * np.pi, allow_nan=False))
    return np.array([np.cos(a), np.sin(a)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def unit_square():
    from covkit.geometry import Polygon

    return Polygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
