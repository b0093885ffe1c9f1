"""Reference Doppler broadening by direct quadrature of the exact kernel.

Used only for verification.  ``sigma1_broaden_oracle`` integrates a lin-lin
tabulated 0 K cross section against the exact free-gas kernel (in velocity
space, ``y = sqrt(E)``) with adaptive QUADPACK, breaking at every table node
inside the kernel window.  It shares no code with the psi/chi route.
"""

from __future__ import annotations

import math
import warnings

import numba
import numpy as np
from numba import types
from scipy import LowLevelCallable, integrate

from .xs import K_BOLTZMANN

__all__ = ["sigma1_broaden_oracle", "linearize", "OracleError"]

# kernel window half-width in units of beta; exp(-36) is far below tolerance
_WINDOW = 6.0


class OracleError(RuntimeError):
    pass


@numba.cfunc(types.float64(types.float64, types.voidptr), nopython=True)
def _kernel_integrand(y, data):
    head = numba.carray(data, 3, dtype=np.float64)
    n = int(head[0])
    x = head[1]
    beta = head[2]
    buf = numba.carray(data, 3 + 2 * n, dtype=np.float64)
    e = y * y
    lo = 3
    if e < buf[lo] or e > buf[lo + n - 1]:
        return 0.0
    a = 0
    b = n - 1
    while b - a > 1:
        m = (a + b) >> 1
        if buf[lo + m] <= e:
            a = m
        else:
            b = m
    e0 = buf[lo + a]
    e1 = buf[lo + b]
    s0 = buf[lo + n + a]
    s1 = buf[lo + n + b]
    sig = s0 + (e - e0) / (e1 - e0) * (s1 - s0)
    dm = (y - x) / beta
    dp = (y + x) / beta
    return y * y * sig * (math.exp(-dm * dm) - math.exp(-dp * dp))


def sigma1_broaden_oracle(grid, sigma0, T, A, energies=None, rtol=1e-5):
    """Broaden a 0 K table to temperature ``T`` by exact kernel quadrature.

    Parameters
    ----------
    grid, sigma0 : array_like
        Strictly increasing energies (eV) and the 0 K cross section (b),
        interpolated lin-lin and taken as zero outside the table.
    T : float
        Temperature in K.
    A : float
        Target-to-neutron mass ratio.
    energies : array_like, optional
        Where to evaluate; defaults to ``grid``.
    rtol : float
        Relative tolerance handed to the adaptive integrator.

    Returns
    -------
    numpy.ndarray
        Broadened cross section at ``energies``.
    """
    grid = np.ascontiguousarray(grid, dtype=np.float64)
    sigma0 = np.ascontiguousarray(sigma0, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing with at least 2 points")
    if sigma0.shape != grid.shape:
        raise ValueError("sigma0 must match grid")
    if not T > 0:
        raise ValueError("temperature must be positive")
    energies = grid if energies is None else np.atleast_1d(np.asarray(energies, dtype=np.float64))

    beta = math.sqrt(K_BOLTZMANN * T / A)
    n = grid.size
    buf = np.concatenate([[float(n), 0.0, beta], grid, sigma0])
    llc = LowLevelCallable(_kernel_integrand.ctypes, buf.ctypes.data_as(_kernel_integrand.ctypes.argtypes[1]))
    ynodes = np.sqrt(grid)
    out = np.empty(energies.size)
    for i, e in enumerate(energies):
        x = math.sqrt(e)
        buf[1] = x
        a = max(ynodes[0], x - _WINDOW * beta)
        b = min(ynodes[-1], x + _WINDOW * beta)
        if b <= a:
            out[i] = 0.0
            continue
        inner = ynodes[np.searchsorted(ynodes, a, side="right"):np.searchsorted(ynodes, b, side="left")]
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _ = integrate.quad(
                    llc, a, b,
                    points=inner if inner.size else None,
                    epsabs=0.0, epsrel=rtol,
                    limit=max(50, 4 * inner.size + 50),
                )
            except integrate.IntegrationWarning as exc:
                raise OracleError(f"quadrature did not converge at E={e} eV, T={T} K: {exc}") from exc
        out[i] = val / (math.sqrt(math.pi) * beta * e)
    return out


def linearize(func, grid, rtol=1e-4, atol=1e-12, max_points=2_000_000):
    """Refine ``grid`` until ``func`` is lin-lin interpolable to ``rtol``.

    Each segment is bisected while the midpoint value deviates from the
    chord by more than ``rtol * |f(mid)| + atol``.  ``func`` must accept
    an array of energies.
    """
    e = np.unique(np.asarray(grid, dtype=np.float64))
    f = np.asarray(func(e), dtype=np.float64)
    while True:
        mid = 0.5 * (e[:-1] + e[1:])
        fm = np.asarray(func(mid), dtype=np.float64)
        chord = 0.5 * (f[:-1] + f[1:])
        bad = np.abs(fm - chord) > rtol * np.abs(fm) + atol
        # stop bisecting once segments hit floating resolution
        bad &= (e[1:] - e[:-1]) > 1e-12 * e[1:]
        if not bad.any():
            return e, f
        e = np.concatenate([e, mid[bad]])
        f = np.concatenate([f, fm[bad]])
        order = np.argsort(e)
        e, f = e[order], f[order]
        if e.size > max_points:
            raise OracleError("linearize exceeded max_points")
