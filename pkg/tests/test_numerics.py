"""Array-response primitives against scalar-loop reference implementations."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irs_routing.numerics import (
    bs_array_response,
    irs_array_response,
    irs_response_from_cosines,
    steering_vector,
    wrap_spatial_frequency,
)

FINITE = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


def reference_steering(phi: float, n: int) -> np.ndarray:
    """Element-by-element reference: entry m is exp(-j*pi*m*phi)."""
    return np.array([cmath.exp(-1j * math.pi * m * phi) for m in range(n)])


@given(FINITE)
def test_wrap_lands_in_unit_period(phi):
    w = wrap_spatial_frequency(phi)
    assert 0.0 <= w < 2.0
    # the wrap only removes whole periods
    assert abs((phi - w) / 2.0 - round((phi - w) / 2.0)) < 1e-9


@pytest.mark.parametrize(
    "phi,expected",
    [(0.0, 0.0), (2.0, 0.0), (-0.3, 1.7), (3.9, 1.9), (-2.0, 0.0), (1.999, 1.999)],
)
def test_wrap_known_values(phi, expected):
    assert wrap_spatial_frequency(phi) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=200)
@given(FINITE, st.integers(min_value=1, max_value=33))
def test_steering_vector_matches_scalar_loop(phi, n):
    got = steering_vector(phi, n)
    assert got.shape == (n,)
    np.testing.assert_allclose(got, reference_steering(phi, n), atol=1e-12)
    np.testing.assert_allclose(np.abs(got), 1.0, atol=1e-12)


@given(st.floats(min_value=-20.0, max_value=20.0, allow_nan=False))
def test_steering_vector_is_two_periodic(phi):
    a = steering_vector(phi, 8)
    b = steering_vector(phi + 2.0, 8)
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_steering_vector_first_entry_is_one():
    assert steering_vector(0.77, 5)[0] == 1.0 + 0.0j


def test_steering_vector_rejects_empty():
    with pytest.raises(ValueError, match="n >= 1"):
        steering_vector(0.3, 0)


@pytest.mark.parametrize("theta", [-1.2, -0.4, 0.0, 0.3, 1.0])
def test_bs_array_response_phase_ramp(theta):
    n_b, d_a, lam = 16, 0.03, 0.06
    got = bs_array_response(theta, n_b, d_a, lam)
    want = reference_steering((2.0 * d_a / lam) * math.sin(theta), n_b)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_planar_response_is_kron_of_axis_ramps():
    m1, m2, d_i, lam = 4, 3, 0.015, 0.06
    cx, cz = 0.37, -0.52
    got = irs_response_from_cosines(cx, cz, m1, m2, d_i, lam)
    assert got.shape == (m1 * m2,)
    c = 2.0 * d_i / lam
    for i1 in range(m1):
        for i2 in range(m2):
            want = cmath.exp(-1j * math.pi * c * (cx * i1 + cz * i2))
            assert got[i1 * m2 + i2] == pytest.approx(want, abs=1e-12)


@settings(max_examples=100)
@given(
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=-1.0, max_value=1.0),
    st.integers(min_value=1, max_value=8),
    st.integers(min_value=1, max_value=8),
)
def test_planar_response_factorizes(cx, cz, m1, m2):
    lam, d_i = 0.06, 0.015
    got = irs_response_from_cosines(cx, cz, m1, m2, d_i, lam)
    h = steering_vector((2.0 * d_i / lam) * cx, m1)
    v = steering_vector((2.0 * d_i / lam) * cz, m2)
    np.testing.assert_allclose(got, np.kron(h, v), atol=1e-12)


@pytest.mark.parametrize("az,el", [(0.0, math.pi / 2), (0.4, 1.1), (-1.2, 0.3)])
def test_angle_form_reduces_to_direction_cosines(az, el):
    got = irs_array_response(az, el, 5, 4, 0.015, 0.06)
    want = irs_response_from_cosines(
        math.sin(el) * math.cos(az), math.cos(el), 5, 4, 0.015, 0.06
    )
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_boresight_gives_flat_vertical_ramp():
    # elevation from the vertical axis: pi/2 means broadside in the horizontal
    # plane, so the vertical cosine vanishes and only the horizontal ramps
    got = irs_array_response(0.0, math.pi / 2, 3, 4, 0.015, 0.06)
    horiz = steering_vector(0.5, 3)  # c * cos_x = 0.5 * 1
    np.testing.assert_allclose(got, np.kron(horiz, np.ones(4)), atol=1e-12)
