"""Array-response primitives shared by the channel model and the beam searches.

Spatial frequencies are the raw arguments of the steering phase ramp. The
response is 2-periodic in that argument, so every entry point wraps it into
[0, 2) first. All angles are in radians.
"""

from __future__ import annotations

import math

import numpy as np


def wrap_spatial_frequency(phi: float) -> float:
    """Wrap a steering-phase argument into [0, 2)."""
    w = float(phi - 2.0 * math.floor(phi / 2.0))
    # rounding can land exactly on the excluded endpoint (phi slightly below
    # a multiple of the period); that is the same beam as 0
    return 0.0 if w >= 2.0 else w


def steering_vector(phi: float, n: int) -> np.ndarray:
    """Length-n phase ramp [1, e^{-j*pi*phi}, ..., e^{-j*pi*(n-1)*phi}].

    Args:
        phi: spatial frequency, wrapped internally.
        n: number of elements, must be >= 1.

    Returns:
        Complex unit-modulus vector of shape (n,).
    """
    if n < 1:
        raise ValueError(f"steering vector needs n >= 1, got {n}")
    phi = wrap_spatial_frequency(phi)
    return np.exp(-1j * np.pi * phi * np.arange(n))


def bs_array_response(theta: float, n_b: int, d_a: float, wavelength: float) -> np.ndarray:
    """Uniform linear array response for a departure angle theta off boresight."""
    return steering_vector((2.0 * d_a / wavelength) * math.sin(theta), n_b)


def irs_response_from_cosines(
    cos_x: float, cos_z: float, m1: int, m2: int, d_i: float, wavelength: float
) -> np.ndarray:
    """Planar-array response from the two direction cosines along the panel axes.

    cos_x is the direction cosine along the horizontal (m1) axis and cos_z the
    one along the vertical (m2) axis. The combined response is the Kronecker
    product horizontal (x) vertical, which fixes the element ordering used
    everywhere else.
    """
    c = 2.0 * d_i / wavelength
    horiz = steering_vector(c * cos_x, m1)
    vert = steering_vector(c * cos_z, m2)
    return np.kron(horiz, vert)


def irs_array_response(
    theta_a: float, theta_e: float, m1: int, m2: int, d_i: float, wavelength: float
) -> np.ndarray:
    """Planar-array response for azimuth theta_a and elevation theta_e.

    The horizontal direction cosine is sin(theta_e) * cos(theta_a) and the
    vertical one is cos(theta_e); elevation is measured from the vertical
    panel axis, azimuth in the plane orthogonal to it.
    """
    return irs_response_from_cosines(
        math.sin(theta_e) * math.cos(theta_a), math.cos(theta_e), m1, m2, d_i, wavelength
    )
