"""Collision physics kernels and their Python-level wrappers.

Kernels take and return raw RNG states so they can be driven from a
particle's own stream inside the transport loops.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from ..nucleardata.xs import micro_kernel
from ..rng import prn_kernel

__all__ = [
    "ELASTIC",
    "CAPTURE",
    "FISSION",
    "WATT_A",
    "WATT_B",
    "sample_flight",
    "sample_collision_nuclide",
    "sample_reaction",
    "elastic_scatter",
    "sample_watt",
    "watt_moments",
]

ELASTIC, CAPTURE, FISSION = 0, 1, 2
REACTIONS = ("elastic", "capture", "fission")

# U-235 thermal-fission Watt parameters
WATT_A = 0.988e6  # eV
WATT_B = 2.249e-6  # 1/eV


@numba.njit(nogil=True, cache=True)
def flight_kernel(sigma_t, xi):
    return -math.log(1.0 - xi) / sigma_t


@numba.njit(nogil=True, cache=True)
def pick_reaction(s, g, f, xi):
    target = xi * (s + g + f)
    if target < s:
        return ELASTIC
    if target < s + g:
        return CAPTURE
    return FISSION


@numba.njit(nogil=True, cache=True)
def scatter_energy(e, a, mu_cm):
    denom = 1.0 + a * a + 2.0 * a * mu_cm
    if denom < 0.0:
        denom = 0.0
    e_out = e * denom / ((1.0 + a) * (1.0 + a))
    if denom > 0.0:
        mu_lab = (1.0 + a * mu_cm) / math.sqrt(denom)
    else:
        mu_lab = 1.0
    return e_out, min(max(mu_lab, -1.0), 1.0)


@numba.njit(nogil=True, cache=True)
def rotate(u, v, w, mu, phi):
    """Rotate direction (u, v, w) by polar cosine ``mu`` and azimuth ``phi``."""
    cphi = math.cos(phi)
    sphi = math.sin(phi)
    a = math.sqrt(max(0.0, 1.0 - mu * mu))
    b = math.sqrt(max(0.0, 1.0 - w * w))
    if b > 1e-10:
        un = mu * u + a * (u * w * cphi - v * sphi) / b
        vn = mu * v + a * (v * w * cphi + u * sphi) / b
        wn = mu * w - a * b * cphi
    else:
        b = math.sqrt(max(0.0, 1.0 - v * v))
        un = mu * u + a * (u * v * cphi + w * sphi) / b
        vn = mu * v - a * b * cphi
        wn = mu * w + a * (v * w * cphi - u * sphi) / b
    norm = math.sqrt(un * un + vn * vn + wn * wn)
    return un / norm, vn / norm, wn / norm


@numba.njit(nogil=True, cache=True)
def elastic_kernel(e, u, v, w, a, xi1, xi2):
    mu_cm = 2.0 * xi1 - 1.0
    e_out, mu_lab = scatter_energy(e, a, mu_cm)
    un, vn, wn = rotate(u, v, w, mu_lab, 2.0 * math.pi * xi2)
    return e_out, un, vn, wn


@numba.njit(nogil=True, cache=True)
def watt_kernel(a, b, e_max, state):
    """Watt sample by shifting a Maxwellian; returns (E, state, draws)."""
    c = 0.25 * a * a * b
    draws = 0
    while True:
        x1, state = prn_kernel(state)
        x2, state = prn_kernel(state)
        x3, state = prn_kernel(state)
        x4, state = prn_kernel(state)
        draws += 4
        cs = math.cos(0.5 * math.pi * x3)
        maxwell = -a * (math.log(1.0 - x1) + math.log(1.0 - x2) * cs * cs)
        e = maxwell + c + (2.0 * x4 - 1.0) * math.sqrt(a * a * b * maxwell)
        if 0.0 < e <= e_max:
            return e, state, draws


@numba.njit(nogil=True, cache=True)
def _watt_many(a, b, e_max, state, out):
    total = 0
    for i in range(out.size):
        e, state, d = watt_kernel(a, b, e_max, state)
        out[i] = e
        total += d
    return state, total


@numba.njit(nogil=True, cache=True)
def _elastic_many(e, a, xi1, xi2, u, v, w, e_out, d_out):
    for i in range(xi1.size):
        en, un, vn, wn = elastic_kernel(e[i], u[i], v[i], w[i], a, xi1[i], xi2[i])
        e_out[i] = en
        d_out[i, 0] = un
        d_out[i, 1] = vn
        d_out[i, 2] = wn


# ---------------------------------------------------------------------------
# Python API
# ---------------------------------------------------------------------------


def sample_flight(sigma_t, xi):
    """Exponential free flight ``-ln(1 - xi) / sigma_t``."""
    if not sigma_t > 0:
        raise ValueError(f"total cross section must be positive, got {sigma_t}")
    if not 0.0 <= xi < 1.0:
        raise ValueError(f"xi must lie in [0, 1), got {xi}")
    return float(flight_kernel(float(sigma_t), float(xi)))


def _nuclide_totals(material, library, E):
    from ..nucleardata.xs import compile_xs

    out = []
    for name, dens in material.densities:
        nuc = library[name]
        cx = compile_xs([nuc])
        s, g, f, _ = micro_kernel(cx, 0, float(E), float(material.temperature))
        out.append(dens * (s + g + f))
    return out


def sample_collision_nuclide(material, library, E, xi):
    """Index (into ``material.densities``) of the struck nuclide."""
    contrib = _nuclide_totals(material, library, E)
    total = sum(contrib)
    if not total > 0:
        raise ValueError("material has zero total cross section")
    target = xi * total
    cum = 0.0
    for k, c in enumerate(contrib):
        cum += c
        if target < cum:
            return k
    return len(contrib) - 1


def sample_reaction(nuclide, E, T, xi):
    """``"elastic"``, ``"capture"`` or ``"fission"`` for one collision."""
    from ..nucleardata.xs import compile_xs

    s, g, f, _ = micro_kernel(compile_xs([nuclide]), 0, float(E), float(T))
    if not s + g + f > 0:
        raise ValueError(f"{nuclide.name} has zero total cross section at {E} eV")
    return REACTIONS[pick_reaction(s, g, f, float(xi))]


def elastic_scatter(E, direction, A, xi1, xi2):
    """Target-at-rest elastic scatter, isotropic in the centre of mass.

    ``E``, ``xi1`` and ``xi2`` may be arrays (with ``direction`` of shape
    ``(n, 3)``) for bulk sampling.
    """
    if A < 0.9:
        raise ValueError(f"mass ratio {A} below 0.9")
    if np.ndim(E) == 0:
        e, u, v, w = elastic_kernel(float(E), *map(float, direction), float(A), float(xi1), float(xi2))
        return float(e), (float(u), float(v), float(w))
    e = np.ascontiguousarray(E, dtype=np.float64)
    d = np.ascontiguousarray(direction, dtype=np.float64).reshape(-1, 3)
    e_out = np.empty_like(e)
    d_out = np.empty_like(d)
    _elastic_many(
        e, float(A),
        np.ascontiguousarray(xi1, dtype=np.float64), np.ascontiguousarray(xi2, dtype=np.float64),
        np.ascontiguousarray(d[:, 0]), np.ascontiguousarray(d[:, 1]), np.ascontiguousarray(d[:, 2]),
        e_out, d_out,
    )
    return e_out, d_out


def sample_watt(a=WATT_A, b=WATT_B, state=1, size=None, e_max=2.0e7):
    """Watt fission-spectrum energies (eV) drawn from stream ``state``.

    Returns ``(energies, new_state)``; ``energies`` is a float when
    ``size`` is None.
    """
    if not (a > 0 and b > 0):
        raise ValueError("Watt parameters must be positive")
    out = np.empty(1 if size is None else int(size))
    new_state, _ = _watt_many(float(a), float(b), float(e_max), np.uint64(state), out)
    return (float(out[0]) if size is None else out), int(new_state)


def watt_moments(a=WATT_A, b=WATT_B):
    """Closed-form mean and variance of the Watt spectrum."""
    c = 0.25 * a * a * b
    return 1.5 * a + c, 1.5 * a * a + 2.0 * a * c
