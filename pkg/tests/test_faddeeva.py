import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import wofz

from pincellmc.nucleardata import faddeeva_w, psi_chi

# e * erfc(1) and e^{1/4} erfc(1/2), 30-digit mpmath series
W_I = 0.427583576155807004410750344491
W_HALF_I = 0.615690344192925874870793422684


def test_w_at_origin():
    assert faddeeva_w(0j) == pytest.approx(1.0 + 0j, abs=1e-12)


def test_w_on_imaginary_axis():
    w = faddeeva_w(1j)
    assert w.real == pytest.approx(W_I, rel=1e-12)
    assert abs(w.imag) < 1e-14


def test_w_real_argument_is_gaussian():
    assert faddeeva_w(1.0 + 0j).real == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_frozen_values_match_mpmath():
    mpmath.mp.dps = 30
    assert float(mpmath.e * mpmath.erfc(1)) == pytest.approx(W_I, rel=1e-15)
    assert float(mpmath.exp(0.25) * mpmath.erfc(0.5)) == pytest.approx(W_HALF_I, rel=1e-15)


def test_lower_half_plane_rejected():
    with pytest.raises(ValueError):
        faddeeva_w(1.0 - 0.5j)


def test_array_input_keeps_shape():
    z = np.array([[0.1 + 0.2j, 3.0 + 1.0j], [50.0 + 0.1j, 1e4j]])
    w = faddeeva_w(z)
    assert w.shape == z.shape
    np.testing.assert_allclose(w, wofz(z), rtol=1e-10)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(-1e4, 1e4, allow_nan=False),
    st.floats(0.0, 1e4, allow_nan=False),
)
def test_matches_scipy_wofz(x, y):
    z = complex(x, y)
    ref = wofz(z)
    assert abs(faddeeva_w(z) - ref) <= 1e-10 * abs(ref) + 1e-300


@pytest.mark.parametrize("radius", [5.9, 6.1, 29.9, 30.1, 99.0, 101.0])
def test_branch_boundaries(radius):
    theta = np.linspace(0.0, math.pi, 181)
    z = radius * np.exp(1j * theta)
    np.testing.assert_allclose(faddeeva_w(z), wofz(z), rtol=1e-10)


def test_psi_low_temperature_limit():
    assert psi_chi(1e6, 0.0)[0] == pytest.approx(1.0, abs=1e-5)
    assert psi_chi(1e6, 1.0)[0] == pytest.approx(0.5, abs=1e-5)


def test_psi_at_unit_xi():
    psi, chi = psi_chi(1.0, 0.0)
    assert psi == pytest.approx(math.sqrt(math.pi) / 2 * W_HALF_I, rel=1e-12)
    assert psi == pytest.approx(0.545641, abs=1e-6)
    assert chi == pytest.approx(0.0, abs=1e-14)


def test_psi_symmetric_chi_antisymmetric():
    x = np.linspace(-20, 20, 81)
    psi, chi = psi_chi(0.3, x)
    np.testing.assert_allclose(psi, psi[::-1], rtol=1e-12)
    np.testing.assert_allclose(chi, -chi[::-1], rtol=1e-12, atol=1e-15)


def test_psi_area_is_pi():
    # the line shape keeps the Lorentzian area whatever the temperature
    x = np.linspace(-4000, 4000, 800001)
    psi, _ = psi_chi(0.05, x)
    area = np.trapezoid(psi, x)
    assert area == pytest.approx(math.pi, rel=2e-3)


def test_psi_requires_positive_xi():
    with pytest.raises(ValueError):
        psi_chi(0.0, 1.0)
