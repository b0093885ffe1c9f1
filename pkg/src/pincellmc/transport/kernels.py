"""Per-particle event kernels shared by the history and event pipelines.

A history is the sequence of events ``lookup -> advance -> [collide]``
dispatched on the particle's pending-event tag.  Both pipelines call the
same three functions in the same per-particle order, which is why their
results agree bit for bit.

Kernels take the bank as its two column tables ``R`` (float) and ``K``
(int) rather than as one object: numba reference-counts every array
handed across a call, so fewer arrays means cheaper calls.
"""

import math
from typing import NamedTuple

import numba
import numpy as np

from ..geometry import cross_kernel, distance_kernel, locate_kernel
from ..nucleardata.xs import macro_kernel, nuclide_xs
from ..rng import prn_kernel, stream_kernel
from .bank import (
    ABSORBED,
    ALIVE,
    COLLISIONS,
    LOST_GEOMETRY,
    LOST_XS,
    CUT_ENERGY,
    CUT_FLIGHT,
    DRAWS,
    EV_ADVANCE,
    EV_COLLIDE,
    EV_DONE,
    EV_LOOKUP,
    EVENT,
    FLIGHTS,
    HIST,
    MAT,
    N_SITES,
    REGION,
    RNG,
    SIG_NUF,
    SIG_T,
    STATUS,
    SX,
    SY,
    SZ,
    TRK_NUF,
    W_ABS,
    W_CUT,
    WGT,
    E,
    U,
    V,
    W,
    X,
    Y,
    Z,
)
from .physics import CAPTURE, ELASTIC, elastic_kernel, flight_kernel, pick_reaction, watt_kernel

MAX_COMPONENTS = 64


class PhysicsParams(NamedTuple):
    e_cut: float
    flight_cut: int
    e_max: float
    watt_a: float
    watt_b: float


@numba.njit(nogil=True, cache=True)
def draw(K, i):
    u, s = prn_kernel(np.uint64(K[RNG, i]))
    K[RNG, i] = np.int64(s)
    K[DRAWS, i] += 1
    return u


@numba.njit(nogil=True, cache=True)
def finish(R, K, i, status):
    K[STATUS, i] = status
    K[EVENT, i] = EV_DONE
    if status == ABSORBED:
        R[W_ABS, i] += R[WGT, i]
    elif status == CUT_ENERGY or status == CUT_FLIGHT:
        R[W_CUT, i] += R[WGT, i]


@numba.njit(nogil=True, cache=True)
def do_lookup(R, K, i, xs, p):
    e = R[E, i]
    if e < p.e_cut:
        finish(R, K, i, CUT_ENERGY)
        return
    t, s, a, f, nf = macro_kernel(xs, K[MAT, i], e)
    if not t > 0.0:
        finish(R, K, i, LOST_XS)
        return
    R[SIG_T, i] = np.float64(np.float32(t))
    R[SIG_NUF, i] = np.float64(np.float32(nf))
    K[EVENT, i] = EV_ADVANCE


@numba.njit(nogil=True, cache=True)
def do_advance(R, K, i, g, p):
    d_coll = flight_kernel(R[SIG_T, i], draw(K, i))
    x, y, z = R[X, i], R[Y, i], R[Z, i]
    u, v, w = R[U, i], R[V, i], R[W, i]
    d_surf, surf = distance_kernel(g, K[REGION, i], x, y, u, v)
    crossing = d_surf < d_coll
    d = d_surf if crossing else d_coll
    if not (0.0 <= d < math.inf):
        finish(R, K, i, LOST_GEOMETRY)
        return
    x += d * u
    y += d * v
    z += d * w
    R[TRK_NUF, i] += R[WGT, i] * d * R[SIG_NUF, i]
    K[FLIGHTS, i] += 1
    if crossing:
        x, y, z, u, v, w, reg = cross_kernel(g, surf, x, y, z, u, v, w)
        K[REGION, i] = reg
        m = g.region_mat[reg]
        K[EVENT, i] = EV_LOOKUP if m != K[MAT, i] else EV_ADVANCE
        K[MAT, i] = m
    else:
        K[EVENT, i] = EV_COLLIDE
    R[X, i], R[Y, i], R[Z, i] = x, y, z
    R[U, i], R[V, i], R[W, i] = u, v, w
    if K[FLIGHTS, i] > p.flight_cut:
        finish(R, K, i, CUT_FLIGHT)


@numba.njit(nogil=True, cache=True)
def do_collide(R, K, i, xs, work):
    """Collision at the particle's position.  ``work`` is (5, MAX_COMPONENTS) scratch."""
    m = K[MAT, i]
    e = R[E, i]
    temp = xs.mat_temp[m]
    lo = xs.mat[m, 0]
    nk = xs.mat[m, 1] - lo
    points, res, nuc, awr = xs.points, xs.res, xs.nuc, xs.awr
    hash_, near, far, log_lo, inv_width = xs.hash, xs.near, xs.far, xs.hash_log_lo, xs.hash_inv_width
    total = 0.0
    for k in range(nk):
        n = xs.comp_nuc[lo + k]
        s, g, f, nu = nuclide_xs(points, res, nuc, awr, hash_, near, far, log_lo, inv_width, n, e, temp)
        work[0, k] = s
        work[1, k] = g
        work[2, k] = f
        work[3, k] = nu
        work[4, k] = xs.comp_dens[lo + k] * (s + g + f)
        total += work[4, k]
    target = draw(K, i) * total
    c = nk - 1
    cum = 0.0
    for k in range(nk):
        cum += work[4, k]
        if target < cum:
            c = k
            break
    reaction = pick_reaction(work[0, c], work[1, c], work[2, c], draw(K, i))
    K[COLLISIONS, i] += 1
    if reaction == ELASTIC:
        xi1 = draw(K, i)
        xi2 = draw(K, i)
        en, u, v, w = elastic_kernel(e, R[U, i], R[V, i], R[W, i], awr[xs.comp_nuc[lo + c]], xi1, xi2)
        R[E, i] = en
        R[U, i], R[V, i], R[W, i] = u, v, w
        K[EVENT, i] = EV_LOOKUP
        return
    finish(R, K, i, ABSORBED)
    if reaction == CAPTURE:
        return
    K[N_SITES, i] = int(math.floor(R[WGT, i] * work[3, c] + draw(K, i)))
    R[SX, i], R[SY, i], R[SZ, i] = R[X, i], R[Y, i], R[Z, i]


@numba.njit(nogil=True, cache=True)
def run_histories(R, K, lo, hi, xs, g, p):
    """Follow each particle in ``lo..hi`` to the end of its history."""
    work = np.empty((5, MAX_COMPONENTS))
    for i in range(lo, hi):
        while K[STATUS, i] == ALIVE:
            ev = K[EVENT, i]
            if ev == EV_LOOKUP:
                do_lookup(R, K, i, xs, p)
            elif ev == EV_ADVANCE:
                do_advance(R, K, i, g, p)
            else:
                do_collide(R, K, i, xs, work)


@numba.njit(nogil=True, cache=True)
def stage_lookup(R, K, lo, hi, xs, p):
    for i in range(lo, hi):
        if K[STATUS, i] == ALIVE and K[EVENT, i] == EV_LOOKUP:
            do_lookup(R, K, i, xs, p)


@numba.njit(nogil=True, cache=True)
def stage_advance(R, K, lo, hi, g, p):
    for i in range(lo, hi):
        if K[STATUS, i] == ALIVE and K[EVENT, i] == EV_ADVANCE:
            do_advance(R, K, i, g, p)


@numba.njit(nogil=True, cache=True)
def stage_collide(R, K, lo, hi, xs):
    work = np.empty((5, MAX_COMPONENTS))
    for i in range(lo, hi):
        if K[STATUS, i] == ALIVE and K[EVENT, i] == EV_COLLIDE:
            do_collide(R, K, i, xs, work)


@numba.njit(nogil=True, cache=True)
def init_source(R, K, lo, hi, seed, batch, n_per_batch, first, src, src_radius, g, p):
    """Fill slots ``lo..hi`` with source particles for ``batch``.

    The first batch samples positions uniformly inside ``src_radius`` (the
    whole cell when it is zero); later batches read ``src`` (n, 3).
    """
    h = g.half_pitch
    for s in range(lo, hi):
        R[:, s] = 0.0
        K[:, s] = 0
        K[HIST, s] = batch * n_per_batch + s
        K[RNG, s] = np.int64(stream_kernel(seed, K[HIST, s]))
        if first:
            if src_radius > 0.0:
                while True:
                    x = src_radius * (2.0 * draw(K, s) - 1.0)
                    y = src_radius * (2.0 * draw(K, s) - 1.0)
                    if x * x + y * y < src_radius * src_radius:
                        break
            else:
                x = h * (2.0 * draw(K, s) - 1.0)
                y = h * (2.0 * draw(K, s) - 1.0)
            z = 0.0
        else:
            x = src[s, 0]
            y = src[s, 1]
            z = src[s, 2]
        e, st, nd = watt_kernel(p.watt_a, p.watt_b, p.e_max, np.uint64(K[RNG, s]))
        K[RNG, s] = np.int64(st)
        K[DRAWS, s] += nd
        mu = 2.0 * draw(K, s) - 1.0
        phi = 2.0 * math.pi * draw(K, s)
        sn = math.sqrt(max(0.0, 1.0 - mu * mu))
        R[X, s], R[Y, s], R[Z, s] = x, y, z
        R[U, s] = sn * math.cos(phi)
        R[V, s] = sn * math.sin(phi)
        R[W, s] = mu
        R[E, s] = e
        R[WGT, s] = 1.0
        reg = locate_kernel(g, x, y)
        K[REGION, s] = reg
        K[MAT, s] = g.region_mat[reg]
        K[STATUS, s] = ALIVE
        K[EVENT, s] = EV_LOOKUP


@numba.njit(nogil=True, cache=True)
def resample_sites(sites, n, state):
    """Pick exactly ``n`` source sites: a uniform subset, or all plus
    draws with replacement when short.  Returns (indices, state)."""
    m = sites.shape[0]
    out = np.empty(n, dtype=np.int64)
    if m >= n:
        idx = np.arange(m)
        for i in range(n):
            u, state = prn_kernel(state)
            j = i + min(int(u * (m - i)), m - i - 1)
            t = idx[i]
            idx[i] = idx[j]
            idx[j] = t
        out[:] = np.sort(idx[:n])
    else:
        out[:m] = np.arange(m)
        for i in range(m, n):
            u, state = prn_kernel(state)
            out[i] = min(int(u * m), m - 1)
    return out, state
