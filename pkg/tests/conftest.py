import pytest
from hypothesis import strategies as st

from simpson_scope import BinaryPredictionSet


@st.composite
def prediction_sets(draw, min_size=1, max_size=8):
    """Random label/decision bit pairs of equal length."""
    n = draw(st.integers(min_value=min_size, max_value=max_size))
    y = draw(st.lists(st.sampled_from((0, 1)), min_size=n, max_size=n))
    yhat = draw(st.lists(st.sampled_from((0, 1)), min_size=n, max_size=n))
    return BinaryPredictionSet(y, yhat)


# Smoothing constants kept away from the excluded points {0, -1, -2} and from
# the blow-up region near -1, so closed-form comparisons stay within 1e-12.
admissible_gammas = (
    st.floats(min_value=-0.9, max_value=5.0, allow_nan=False, allow_infinity=False)
    .filter(lambda g: abs(g) > 1e-3)
)


@pytest.fixture
def e1():
    """The worked four-sample set: one cell in each contingency quadrant."""
    return BinaryPredictionSet((1, 0, 1, 0), (1, 1, 0, 0))
