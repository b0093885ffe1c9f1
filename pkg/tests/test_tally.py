import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pincellmc.tally import batch_keff, doppler_coefficient, format_value_sigma, mean_std, parse_value_sigma


def test_batch_keff_examples():
    assert batch_keff(0.0, 100.0) == 0.0
    assert batch_keff(100.0, 100.0) == 1.0
    with pytest.raises(ValueError):
        batch_keff(1.0, 0.0)


def test_mean_std_examples():
    assert mean_std([1.1, 1.1, 1.1]) == (pytest.approx(1.1), 0.0)
    mean, sigma = mean_std([1.0, 1.0, 1.0, 1.002])
    assert mean == pytest.approx(1.0005, abs=1e-12)
    assert sigma == pytest.approx(0.0005, abs=1e-12)
    assert mean_std([0.9, 1.3] * 7)[0] == pytest.approx(1.1)


def test_mean_std_needs_two():
    with pytest.raises(ValueError):
        mean_std([1.0])


def test_doppler_equal_k_is_zero():
    assert doppler_coefficient(1.1, 0.001, 600, 1.1, 0.001, 900)[0] == 0.0


@pytest.mark.parametrize(
    "k1, k2, expected",
    [(1.18256, 1.17245, -2.430), (1.17636, 1.16613, -2.486)],
)
def test_doppler_reference_values(k1, k2, expected):
    alpha, _ = doppler_coefficient(k1, 0.0001, 600.0, k2, 0.0001, 900.0)
    assert alpha == pytest.approx(expected, abs=1e-3)


def test_doppler_sigma_propagation():
    _, s = doppler_coefficient(1.0, 0.001, 600.0, 1.0, 0.001, 900.0)
    assert s == pytest.approx(1e5 / 300.0 * math.sqrt(2) * 0.001)


def test_doppler_needs_increasing_temperature():
    with pytest.raises(ValueError):
        doppler_coefficient(1.1, 0.001, 900, 1.0, 0.001, 600)


def test_format_examples():
    assert format_value_sigma(1.17724, 0.00013) == "1.17724 (13)"
    assert format_value_sigma(1.18256, 0.00021) == "1.18256 (21)"


@given(st.floats(0.5, 2.0), st.floats(1e-6, 1e-2))
def test_format_round_trip(value, sigma):
    text = format_value_sigma(value, sigma)
    v, s = parse_value_sigma(text)
    assert format_value_sigma(v, s) == text
    assert abs(v - value) <= s
