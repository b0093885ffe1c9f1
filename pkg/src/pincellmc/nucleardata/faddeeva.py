"""Faddeeva function and the psi/chi Doppler line-shape functions.

The Faddeeva function ``w(z) = exp(-z**2) * erfc(-i z)`` is evaluated for
``Im z >= 0`` with Weideman's rational expansion (32 terms) near the origin,
the Laplace continued fraction further out and, for ``|z| > 30``, four
terms of the asymptotic series (truncation error below 1e-11).  Both branches are compiled
with numba so they can be called from the transport kernels.
"""

import math

import numba
import numpy as np

__all__ = ["faddeeva_w", "psi_chi", "w_scalar", "psi_scalar"]

_SQRT_PI = math.sqrt(math.pi)
_INV_SQRT_PI = 1.0 / _SQRT_PI


def _weideman_coefficients(n):
    m = 2 * n
    k = np.arange(-m + 1, m)
    length = math.sqrt(n / math.sqrt(2.0))
    t = length * np.tan(k * np.pi / (2 * m))
    f = np.concatenate([[0.0], np.exp(-t * t) * (length * length + t * t)])
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2 * m)
    return length, a[1 : n + 1][::-1].copy()


_L, _A = _weideman_coefficients(32)

# |z|**2 beyond which the continued fraction converges fast enough, and
# beyond which four terms of the asymptotic series are accurate to 1e-11
_CF_RADIUS2 = 36.0
_ASYMPTOTIC_RADIUS2 = 900.0


@numba.njit(nogil=True, cache=True)
def w_scalar(z):
    x = z.real
    y = z.imag
    r2 = x * x + y * y
    if r2 > _ASYMPTOTIC_RADIUS2:
        # 1/z via one real reciprocal; most far-from-line calls land here
        u = z.conjugate() * (1.0 / r2)
        u2 = u * u
        return 1j * _INV_SQRT_PI * u * (1.0 + u2 * (0.5 + u2 * (0.75 + u2 * 1.875)))
    if r2 > _CF_RADIUS2:
        r = 0j
        for j in range(20, 0, -1):
            r = (0.5 * j) / (z - r)
        return 1j * _INV_SQRT_PI / (z - r)
    d = _L - 1j * z
    zz = (_L + 1j * z) / d
    p = 0j
    for c in _A:
        p = p * zz + c
    return 2.0 * p / (d * d) + _INV_SQRT_PI / d


@numba.njit(nogil=True, cache=True)
def psi_scalar(xi, x):
    z = complex(x * xi * 0.5, xi * 0.5)
    return 0.5 * xi * _SQRT_PI * w_scalar(z).real


@numba.njit(nogil=True, cache=True)
def _psi_chi_scalar(xi, x):
    z = complex(x * xi * 0.5, xi * 0.5)
    wz = w_scalar(z)
    return 0.5 * xi * _SQRT_PI * wz.real, xi * _SQRT_PI * wz.imag


@numba.njit(nogil=True, cache=True)
def _w_array(z, out):
    for i in range(z.size):
        out[i] = w_scalar(z[i])


def faddeeva_w(z):
    """Faddeeva function for ``Im(z) >= 0``.

    Accepts a scalar or an array; returns the same shape.  Relative error
    is below 1e-10 over the upper half plane (largest where the branches
    meet).
    """
    arr = np.asarray(z, dtype=np.complex128)
    if np.any(arr.imag < 0):
        raise ValueError("faddeeva_w is defined here for Im(z) >= 0 only")
    flat = np.ascontiguousarray(arr.ravel())
    out = np.empty_like(flat)
    _w_array(flat, out)
    if arr.ndim == 0:
        return complex(out[0])
    return out.reshape(arr.shape)


def psi_chi(xi, x):
    """Doppler line-shape functions ``(psi, chi)``.

    ``xi`` is the ratio of the total width to the Doppler width and ``x``
    the distance from the resonance energy in half-widths.  As ``xi``
    grows, ``psi`` tends to the natural Lorentzian ``1 / (1 + x**2)``.
    ``x`` may be an array.
    """
    if not xi > 0:
        raise ValueError(f"xi must be positive, got {xi}")
    if np.ndim(x) == 0:
        psi, chi = _psi_chi_scalar(float(xi), float(x))
        return float(psi), float(chi)
    x = np.asarray(x, dtype=np.float64)
    w = faddeeva_w((x + 1j) * (0.5 * xi))
    return 0.5 * xi * _SQRT_PI * w.real, xi * _SQRT_PI * w.imag
