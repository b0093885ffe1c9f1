"""Structure-of-arrays particle bank.

Columns live in two 2-D tables, one float64 and one int64, with one row
per quantity.  A row is a contiguous column over all particles, so a
stage sweeping one quantity reads memory linearly.  Kernels index rows by
the integer constants below; Python code uses attribute access
(``bank.E``, ``bank.status``), which returns a view of the row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALIVE, ABSORBED, CUT_ENERGY, CUT_FLIGHT, LOST_GEOMETRY, LOST_XS = 0, 1, 2, 3, 4, 5
EV_LOOKUP, EV_ADVANCE, EV_COLLIDE, EV_DONE = 0, 1, 2, 3

STATUS_NAMES = (
    "alive", "absorbed", "energy cutoff", "flight cutoff",
    "lost: geometry inconsistency", "lost: non-positive total cross section",
)
EVENT_NAMES = ("cross-section", "advance", "collision", "done")

REAL_COLUMNS = (
    "x", "y", "z", "u", "v", "w", "E", "wgt",
    "sig_t", "sig_nuf", "trk_nuf", "w_abs", "w_cut", "sx", "sy", "sz",
)
INT_COLUMNS = ("region", "mat", "rng", "hist", "status", "event", "draws", "flights", "collisions", "n_sites")

X, Y, Z, U, V, W, E, WGT, SIG_T, SIG_NUF, TRK_NUF, W_ABS, W_CUT, SX, SY, SZ = range(len(REAL_COLUMNS))
REGION, MAT, RNG, HIST, STATUS, EVENT, DRAWS, FLIGHTS, COLLISIONS, N_SITES = range(len(INT_COLUMNS))

_REAL = {name: k for k, name in enumerate(REAL_COLUMNS)}
_INT = {name: k for k, name in enumerate(INT_COLUMNS)}


class ParticleBank:
    """``n`` particles as float and integer column tables.

    The random state is kept in an int64 row; states are below 2**63 so
    the conversion is lossless.
    """

    __slots__ = ("real", "int")

    def __init__(self, real, int_):
        self.real = real
        self.int = int_

    @property
    def count(self):
        return self.real.shape[1]

    def __getattr__(self, name):
        if name in _REAL:
            return self.real[_REAL[name]]
        if name in _INT:
            return self.int[_INT[name]]
        raise AttributeError(name)

    def __len__(self):
        return self.count


def allocate_bank(n):
    return ParticleBank(np.zeros((len(REAL_COLUMNS), n)), np.zeros((len(INT_COLUMNS), n), dtype=np.int64))


def permute_bank(bank, perm):
    """Apply ``perm`` to the first ``len(perm)`` entries of every column."""
    n = perm.size
    bank.real[:, :n] = bank.real[:, :n][:, perm]
    bank.int[:, :n] = bank.int[:, :n][:, perm]


@dataclass(frozen=True)
class Particle:
    """Read-only snapshot of one bank entry."""

    position: tuple
    direction: tuple
    energy: float
    weight: float
    region: int
    material: int
    rng: int
    history: int
    status: str
    pending_event: str


def particle_view(bank, i):
    r = bank.real[:, i]
    k = bank.int[:, i]
    return Particle(
        position=(float(r[X]), float(r[Y]), float(r[Z])),
        direction=(float(r[U]), float(r[V]), float(r[W])),
        energy=float(r[E]),
        weight=float(r[WGT]),
        region=int(k[REGION]),
        material=int(k[MAT]),
        rng=int(k[RNG]),
        history=int(k[HIST]),
        status=STATUS_NAMES[k[STATUS]],
        pending_event=EVENT_NAMES[k[EVENT]],
    )
