"""On-the-fly cross-section evaluation.

Everything the transport kernels need is flattened into :class:`XSData`
(a namedtuple of contiguous arrays) so that numba can read it without
Python objects.  The public functions below wrap the same kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .faddeeva import psi_scalar, w_scalar
from .library import EnergyOutOfRangeError, Material, Nuclide

__all__ = [
    "K_BOLTZMANN",
    "PEAK_CONSTANT",
    "MacroXS",
    "XSData",
    "compile_xs",
    "sigma_pointwise",
    "sigma_resonant",
    "macro_xs",
]

K_BOLTZMANN = 8.617333262e-5  # eV/K
PEAK_CONSTANT = 2.608e6  # barn eV
_SQRT_PI = math.sqrt(math.pi)


class XSData(NamedTuple):
    """Flattened library.  Few arrays on purpose: every array crossing a
    jitted call boundary costs a reference-count round trip."""

    points: np.ndarray  # (n_points, 5) rows of E, sigma_s, sigma_g, sigma_f, nu
    res: np.ndarray  # (n_res, 7) E0, Gamma, sigma_0, Gg/G, Gf/G, Re q, Im q
    nuc: np.ndarray  # (n_nuclides, 4) point range and resonance range
    awr: np.ndarray  # (n_nuclides,)
    mat: np.ndarray  # (n_materials, 2) component range
    comp_nuc: np.ndarray  # nuclide index of each material component
    comp_dens: np.ndarray  # atom density, 1/(barn cm)
    mat_temp: np.ndarray  # (n_materials,) kelvin
    hash: np.ndarray  # (n_nuclides, HASH_BINS + 1) first point row of each log-energy bin
    near: np.ndarray  # (n_nuclides, HASH_BINS, 2) resonance rows broadened exactly in each bin
    far: np.ndarray  # (n_nuclides, HASH_BINS, 4) 0 K tails of all other lines: g, dg, f, df
    hash_log_lo: float
    hash_inv_width: float


# columns of XSData.points and XSData.res
P_E, P_S, P_G, P_F, P_NU = range(5)
R_E0, R_GAMMA, R_PEAK, R_FG, R_FF, R_QRE, R_QIM = range(7)

# equal-lethargy bins mapping an energy to a short search window
HASH_BINS = 8192

# a line is broadened exactly in a bin within NEAR_WIDTHS * (Gamma + Doppler
# width at NEAR_T_MAX) of it; elsewhere its 0 K tail is tabulated per bin
NEAR_WIDTHS = 30.0
NEAR_T_MAX = 3000.0


def _line_tails(res, energies):
    """0 K SLBW line shapes, shape ``(len(energies), n_lines)``."""
    e = energies[:, None]
    x = 2.0 * (e - res[None, :, R_E0]) / res[None, :, R_GAMMA]
    return res[None, :, R_PEAK] * np.sqrt(res[None, :, R_E0] / e) / (1.0 + x * x)


def _near_far(res, awr, edges):
    """Per-bin exact-line ranges and linear tables of the remaining tails."""
    nb = edges.size - 1
    near = np.zeros((nb, 2), dtype=np.int64)
    far = np.zeros((nb, 4))
    if res.shape[0] == 0:
        return near, far
    e0 = res[:, R_E0]
    doppler = np.sqrt(4.0 * e0 * K_BOLTZMANN * NEAR_T_MAX / awr)
    reach = NEAR_WIDTHS * (res[:, R_GAMMA] + doppler)
    hit = (e0[None, :] + reach[None, :] >= edges[:-1, None]) & (e0[None, :] - reach[None, :] <= edges[1:, None])
    any_hit = hit.any(axis=1)
    first = np.where(any_hit, hit.argmax(axis=1), 0)
    last = np.where(any_hit, hit.shape[1] - hit[:, ::-1].argmax(axis=1), 0)
    near[:, 0], near[:, 1] = first, last
    shape = _line_tails(res, edges)
    for col, ratio in ((0, R_FG), (2, R_FF)):
        c = np.concatenate([np.zeros((edges.size, 1)), np.cumsum(shape * res[None, :, ratio], axis=1)], axis=1)
        rows = np.arange(nb)
        lo_val = c[rows, -1] - (c[rows, last] - c[rows, first])
        hi_val = c[rows + 1, -1] - (c[rows + 1, last] - c[rows + 1, first])
        far[:, col] = lo_val
        far[:, col + 1] = hi_val - lo_val
    return near, far


def _compile_nuclides(nuclides):
    points, res, nuc, awr = [], [], [], []
    n_pts = 0
    for n in nuclides:
        points.append(np.column_stack([n.grid, n.sigma_s, n.sigma_g, n.sigma_f, n.nu]))
        lo_r = len(res)
        for r in sorted(n.resonances, key=lambda r: r.E0):
            gam = r.Gamma
            q = np.sqrt(complex(r.E0, -0.5 * gam))
            peak = PEAK_CONSTANT * r.g * (r.Gamma_n / gam) / r.E0
            res.append((r.E0, gam, peak, r.Gamma_g / gam, r.Gamma_f / gam, q.real, q.imag))
        nuc.append((n_pts, n_pts + n.grid.size, lo_r, len(res)))
        n_pts += n.grid.size
        awr.append(n.A)
    res = np.array(res, dtype=np.float64).reshape(-1, 7)
    e_lo = min(n.grid[0] for n in nuclides)
    e_hi = max(n.grid[-1] for n in nuclides)
    log_lo = math.log(e_lo)
    width = (math.log(e_hi) - log_lo) / HASH_BINS
    edges = np.exp(log_lo + width * np.arange(HASH_BINS + 1))
    edges[0], edges[-1] = e_lo, e_hi
    table = np.empty((len(nuclides), HASH_BINS + 1), dtype=np.int64)
    near = np.empty((len(nuclides), HASH_BINS, 2), dtype=np.int64)
    far = np.empty((len(nuclides), HASH_BINS, 4))
    for k, (n, row) in enumerate(zip(nuclides, nuc)):
        i = np.searchsorted(n.grid, edges, side="right") - 1
        table[k] = row[0] + np.clip(i, 0, n.grid.size - 2)
        nr, fr = _near_far(res[row[2]:row[3]], n.A, edges)
        near[k] = nr + row[2]
        far[k] = fr
    return dict(
        hash=table,
        near=near,
        far=far,
        hash_log_lo=log_lo,
        hash_inv_width=1.0 / width,
        points=np.ascontiguousarray(np.concatenate(points), dtype=np.float64),
        res=res,
        nuc=np.array(nuc, dtype=np.int64).reshape(-1, 4),
        awr=np.array(awr, dtype=np.float64),
    )


def compile_xs(library, materials=()):
    """Flatten a library (and optionally materials) into :class:`XSData`.

    Nuclide indices follow library order; material ``k`` in ``materials``
    must have ``id == k``.
    """
    nuclides = list(library)
    index = {n.name: i for i, n in enumerate(nuclides)}
    mat, comp_nuc, comp_dens, mat_temp = [], [], [], []
    for k, m in enumerate(materials):
        if m.id != k:
            raise ValueError(f"material ids must be contiguous from 0; got {m.id} at position {k}")
        lo = len(comp_nuc)
        for name, dens in m.densities:
            if name not in index:
                raise KeyError(f"material {m.id} uses unknown nuclide {name!r}")
            comp_nuc.append(index[name])
            comp_dens.append(dens)
        mat.append((lo, len(comp_nuc)))
        if m.temperature > NEAR_T_MAX:
            raise ValueError(f"material {m.id}: temperature {m.temperature} K above {NEAR_T_MAX} K")
        mat_temp.append(m.temperature)
    return XSData(
        **_compile_nuclides(nuclides),
        mat=np.array(mat, dtype=np.int64).reshape(-1, 2),
        comp_nuc=np.array(comp_nuc, dtype=np.int64),
        comp_dens=np.array(comp_dens, dtype=np.float64),
        mat_temp=np.array(mat_temp, dtype=np.float64),
    )


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------


@numba.njit(nogil=True, cache=True, inline="always")
def grid_index(points, lo, hi, e):
    """Largest i in [lo, hi-2] with points[i, 0] <= e (binary search)."""
    a = lo
    b = hi - 1
    while b - a > 1:
        m = (a + b) >> 1
        if points[m, P_E] <= e:
            a = m
        else:
            b = m
    return a


@numba.njit(nogil=True, cache=True, inline="always")
def interpolate(points, lo, hi, e, a, b):
    """Lin-lin ``(sigma_s, sigma_g, sigma_f, nu)`` on rows ``lo..hi``; exact at nodes.

    The interval is searched for in rows ``a..b`` only.
    """
    if not (points[lo, P_E] <= e <= points[hi - 1, P_E]):
        raise ValueError("energy outside nuclide grid")
    i = grid_index(points, max(a, lo), min(b, hi), e)
    e0 = points[i, P_E]
    if e == e0:
        return points[i, P_S], points[i, P_G], points[i, P_F], points[i, P_NU]
    e1 = points[i + 1, P_E]
    if e == e1:
        return points[i + 1, P_S], points[i + 1, P_G], points[i + 1, P_F], points[i + 1, P_NU]
    f = (e - e0) / (e1 - e0)
    s = points[i, P_S] + f * (points[i + 1, P_S] - points[i, P_S])
    g = points[i, P_G] + f * (points[i + 1, P_G] - points[i, P_G])
    fi = points[i, P_F] + f * (points[i + 1, P_F] - points[i, P_F])
    nu = points[i, P_NU] + f * (points[i + 1, P_NU] - points[i, P_NU])
    return s, g, fi, nu


EXACT = 0
PSI = 1


@numba.njit(nogil=True, cache=True, inline="always")
def broadened_lines(res, lo, hi, a, e, temperature, method):
    """Doppler-broadened SLBW capture and fission sums over lines ``lo..hi``.

    ``EXACT`` integrates the free-gas kernel in closed form: the line is
    split into its two poles in ``sqrt(E)`` and each pole costs one
    Faddeeva evaluation.  ``PSI`` is the classic psi line shape with the
    Doppler width taken at the resonance energy.
    """
    sg = 0.0
    sf = 0.0
    if lo == hi:
        return sg, sf
    beta = math.sqrt(K_BOLTZMANN * temperature / a)
    y = math.sqrt(e)
    for r in range(lo, hi):
        e0 = res[r, R_E0]
        gam = res[r, R_GAMMA]
        if temperature <= 0.0:
            x = 2.0 * (e - e0) / gam
            sig = res[r, R_PEAK] * math.sqrt(e0 / e) / (1.0 + x * x)
        elif method == PSI:
            x = 2.0 * (e - e0) / gam
            doppler = math.sqrt(4.0 * e0 * K_BOLTZMANN * temperature / a)
            sig = res[r, R_PEAK] * math.sqrt(e0 / e) * psi_scalar(gam / doppler, x)
        else:
            q = complex(res[r, R_QRE], res[r, R_QIM])
            w1 = w_scalar(((q - y) / beta).conjugate())
            w2 = w_scalar((-q - y) / beta)
            sig = res[r, R_PEAK] * math.sqrt(e0) * _SQRT_PI * gam / (4.0 * beta * e) * (w1.real - w2.real)
        sg += sig * res[r, R_FG]
        sf += sig * res[r, R_FF]
    return sg, sf


@numba.njit(nogil=True, cache=True, inline="always")
def search_window(hash_row, log_lo, inv_width, e):
    """Bin ``k`` of ``e``, its fractional position ``t`` and point rows
    ``(a, b)`` bracketing the interval of ``e``, padded by one bin each
    side against rounding in the log."""
    nb = hash_row.size - 1
    pos = (math.log(e) - log_lo) * inv_width if e > 0.0 else 0.0
    k = min(max(int(pos), 0), nb - 1)
    t = min(max(pos - k, 0.0), 1.0)
    return hash_row[max(k - 1, 0)], hash_row[min(k + 2, nb)] + 2, k, t


@numba.njit(nogil=True, cache=True, inline="always")
def resonance_sums(res, near_row, far_row, k, t, a, e, temperature, method):
    """Broadened capture and fission: exact near lines plus tabulated far tails."""
    sg, sf = broadened_lines(res, near_row[k, 0], near_row[k, 1], a, e, temperature, method)
    sg += far_row[k, 0] + t * far_row[k, 1]
    sf += far_row[k, 2] + t * far_row[k, 3]
    return sg, sf


@numba.njit(nogil=True, cache=True)
def pointwise_kernel(xs, n, e):
    a, b, _, _ = search_window(xs.hash[n], xs.hash_log_lo, xs.hash_inv_width, e)
    return interpolate(xs.points, xs.nuc[n, 0], xs.nuc[n, 1], e, a, b)


@numba.njit(nogil=True, cache=True)
def resonance_kernel(xs, n, e, temperature, method=EXACT):
    _, _, k, t = search_window(xs.hash[n], xs.hash_log_lo, xs.hash_inv_width, e)
    return resonance_sums(xs.res, xs.near[n], xs.far[n], k, t, xs.awr[n], e, temperature, method)


@numba.njit(nogil=True, cache=True)
def in_span(xs, n, e):
    return xs.points[xs.nuc[n, 0], P_E] <= e <= xs.points[xs.nuc[n, 1] - 1, P_E]


@numba.njit(nogil=True, cache=True, inline="always")
def nuclide_xs(points, res, nuc, awr, hash_, near, far, log_lo, inv_width, n, e, temperature):
    """(scatter, capture, fission, nu) for nuclide n at (E, T)."""
    a, b, k, t = search_window(hash_[n], log_lo, inv_width, e)
    s, g, f, nu = interpolate(points, nuc[n, 0], nuc[n, 1], e, a, b)
    rg, rf = resonance_sums(res, near[n], far[n], k, t, awr[n], e, temperature, EXACT)
    return s, g + rg, f + rf, nu


@numba.njit(nogil=True, cache=True)
def micro_kernel(xs, n, e, temperature):
    return nuclide_xs(
        xs.points, xs.res, xs.nuc, xs.awr, xs.hash, xs.near, xs.far, xs.hash_log_lo, xs.hash_inv_width,
        n, e, temperature,
    )


@numba.njit(nogil=True, cache=True)
def macro_kernel(xs, m, e):
    """(total, scatter, absorb, fission, nu_fission) in 1/cm, double precision."""
    points, res, nuc, awr = xs.points, xs.res, xs.nuc, xs.awr
    hash_, near, far, log_lo, inv_width = xs.hash, xs.near, xs.far, xs.hash_log_lo, xs.hash_inv_width
    comp_nuc, comp_dens = xs.comp_nuc, xs.comp_dens
    t = xs.mat_temp[m]
    ss = 0.0
    sa = 0.0
    sf = 0.0
    snf = 0.0
    for k in range(xs.mat[m, 0], xs.mat[m, 1]):
        d = comp_dens[k]
        s, g, f, nu = nuclide_xs(points, res, nuc, awr, hash_, near, far, log_lo, inv_width, comp_nuc[k], e, t)
        ss += d * s
        sa += d * (g + f)
        sf += d * f
        snf += d * nu * f
    return ss + sa, ss, sa, sf, snf


# ---------------------------------------------------------------------------
# Python API
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MacroXS:
    total: float
    scatter: float
    absorb: float
    fission: float
    nu_fission: float


def _single(nuclide):
    return compile_xs([nuclide])


def _check_span(nuclide, e):
    lo, hi = nuclide.span
    if not lo <= e <= hi:
        raise EnergyOutOfRangeError(nuclide.name, e, lo, hi)


def sigma_pointwise(nuclide: Nuclide, E: float, xs: XSData | None = None):
    """Lin-lin interpolated 0 K background ``(sigma_s, sigma_g, sigma_f, nu)``."""
    _check_span(nuclide, E)
    xs = xs if xs is not None else _single(nuclide)
    return tuple(float(v) for v in pointwise_kernel(xs, 0, float(E)))


def sigma_resonant(nuclide: Nuclide, E, T: float, xs: XSData | None = None, method: str = "exact"):
    """Broadened capture and fission cross sections at temperature ``T``.

    ``method="exact"`` (the default, and what transport uses) is the
    closed-form free-gas broadening of each SLBW line; ``method="psi"``
    is the textbook psi approximation.  The smooth background is added
    unbroadened.  ``E`` may be a scalar or an array.
    """
    if method not in ("exact", "psi"):
        raise ValueError(f"unknown broadening method {method!r}")
    if not 0 < T <= NEAR_T_MAX:
        raise ValueError(f"temperature must lie in (0, {NEAR_T_MAX}] K, got {T}")
    xs = xs if xs is not None else _single(nuclide)
    energies = np.atleast_1d(np.asarray(E, dtype=np.float64))
    lo, hi = nuclide.span
    bad = (energies < lo) | (energies > hi)
    if bad.any():
        raise EnergyOutOfRangeError(nuclide.name, float(energies[bad][0]), lo, hi)
    sg, sf = _resonant_array(xs, energies, float(T), EXACT if method == "exact" else PSI)
    if np.ndim(E) == 0:
        return float(sg[0]), float(sf[0])
    return sg, sf


@numba.njit(nogil=True, cache=True)
def _resonant_array(xs, energies, temperature, method):
    sg = np.empty(energies.size)
    sf = np.empty(energies.size)
    for i in range(energies.size):
        e = energies[i]
        _, g, f, _ = pointwise_kernel(xs, 0, e)
        rg, rf = resonance_kernel(xs, 0, e, temperature, method)
        sg[i] = g + rg
        sf[i] = f + rf
    return sg, sf


def macro_xs(material: Material, library, E: float) -> MacroXS:
    """Macroscopic cross sections of ``material`` at energy ``E``."""
    total = scatter = absorb = fission = nu_fission = 0.0
    for name, dens in material.densities:
        nuc = library[name]
        _check_span(nuc, E)
        s, _, _, nu = sigma_pointwise(nuc, E)
        g, f = sigma_resonant(nuc, E, material.temperature)
        scatter += dens * s
        absorb += dens * (g + f)
        fission += dens * f
        nu_fission += dens * nu * f
    return MacroXS(scatter + absorb, scatter, absorb, fission, nu_fission)
