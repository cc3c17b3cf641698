import pytest
from hypothesis import given
from hypothesis import strategies as st

from simpson_scope import (
    MetricDomainError,
    RosSamplePairs,
    check_type1,
    check_type2,
    ros_aggregate,
    ros_average,
)


def test_aggregate_constant_denominator():
    assert ros_aggregate(RosSamplePairs((1, 1), (2, 2))) == 0.5


def test_aggregate_hand_sum():
    # numerators y*yhat and denominators yhat of the worked four-sample set
    pairs = RosSamplePairs((1, 0, 0, 0), (1, 1, 0, 0))
    assert ros_aggregate(pairs) == 0.5


def test_aggregate_constant_ratio():
    assert ros_aggregate(RosSamplePairs((2, 4), (1, 2))) == 2.0


def test_average_matches_aggregate_under_type_conditions():
    assert ros_average(RosSamplePairs((1, 1), (2, 2))) == 0.5
    assert ros_average(RosSamplePairs((2, 4), (1, 2))) == 2.0


def test_average_diverges_in_general():
    pairs = RosSamplePairs((1, 0), (1, 2))
    assert ros_average(pairs) == 0.5
    assert ros_aggregate(pairs) == pytest.approx(1 / 3)


def test_aggregate_zero_denominator_rejected():
    with pytest.raises(MetricDomainError):
        ros_aggregate(RosSamplePairs((1, 1), (1, -1)))


def test_average_zero_denominator_names_sample():
    with pytest.raises(MetricDomainError, match="sample 1"):
        ros_average(RosSamplePairs((1, 1), (1, 0)))


def test_length_mismatch_rejected():
    with pytest.raises(MetricDomainError):
        RosSamplePairs((1, 2), (1,))
    with pytest.raises(MetricDomainError):
        RosSamplePairs((), ())


def test_type_checks():
    assert check_type1(RosSamplePairs((5, 1, 9), (2, 2, 2)))
    assert check_type2(RosSamplePairs((1, 2), (2, 4)))
    pairs = RosSamplePairs((1, 0), (1, 2))
    assert not check_type1(pairs)
    assert not check_type2(pairs)


def test_type2_with_zero_denominator_is_false():
    assert not check_type2(RosSamplePairs((0, 1), (0, 1)))


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
nonzero = finite.filter(lambda x: abs(x) > 1e-3)


@given(st.lists(finite, min_size=1, max_size=10), nonzero)
def test_type1_sufficiency(a, b):
    pairs = RosSamplePairs(a, [b] * len(a))
    assert check_type1(pairs)
    assert abs(ros_aggregate(pairs) - ros_average(pairs)) <= 1e-9 * max(
        1.0, abs(ros_aggregate(pairs))
    )


@given(st.lists(nonzero, min_size=1, max_size=10), st.floats(min_value=-100, max_value=100))
def test_type2_sufficiency(b, r):
    pairs = RosSamplePairs([r * x for x in b], b)
    if sum(pairs.b) == 0:
        return
    assert check_type2(pairs, tolerance=1e-6)
    assert abs(ros_aggregate(pairs) - ros_average(pairs)) <= 1e-9 * max(
        1.0, abs(r) * len(b)
    )
