"""63-bit linear congruential streams with logarithmic skip-ahead.

Every history owns a window of ``STRIDE`` draws starting at
``history * STRIDE`` steps past the seed-derived origin, so a history's
random numbers do not depend on which worker runs it or in what order.
"""

import numba
import numpy as np

__all__ = [
    "MULTIPLIER",
    "INCREMENT",
    "MODULUS",
    "STRIDE",
    "prn",
    "skip_ahead",
    "init_stream",
    "batch_stream",
]

MULTIPLIER = 2806196910506780709
INCREMENT = 1
MODULUS = 2**63
STRIDE = 152917
MASK = MODULUS - 1

# Stream indices at and beyond this are reserved for batch-level sampling;
# each batch gets BATCH_SPACING windows of its own.
BATCH_STREAM_BASE = 2**40
BATCH_SPACING = 64

_MASK = np.uint64(MASK)
_MULT = np.uint64(MULTIPLIER)
_INC = np.uint64(INCREMENT)
_NORM = 1.0 / MODULUS
_BELOW_ONE = np.float32(np.nextafter(np.float32(1.0), np.float32(0.0)))


@numba.njit(nogil=True, cache=True)
def next_state(state):
    return (_MULT * state + _INC) & _MASK


@numba.njit(nogil=True, cache=True)
def to_uniform(state):
    u = np.float32(state * _NORM)
    if u >= np.float32(1.0):
        u = _BELOW_ONE
    return np.float64(u)


@numba.njit(nogil=True, cache=True)
def prn_kernel(state):
    s = next_state(state)
    return to_uniform(s), s


@numba.njit(nogil=True, cache=True)
def skip_kernel(state, n):
    g = _MULT
    c = _INC
    g_new = np.uint64(1)
    c_new = np.uint64(0)
    n = np.uint64(n) & _MASK
    while n > np.uint64(0):
        if n & np.uint64(1):
            g_new = g_new * g
            c_new = c_new * g + c
        c = (g + np.uint64(1)) * c
        g = g * g
        n = n >> np.uint64(1)
    return (g_new * state + c_new) & _MASK


@numba.njit(nogil=True, cache=True)
def stream_kernel(seed, history):
    origin = np.uint64(seed) & _MASK
    return skip_kernel(origin, np.uint64(history) * np.uint64(STRIDE))


def prn(state):
    """Advance one step: returns ``(uniform, new_state)``.

    The uniform is ``new_state / 2**63`` rounded to single precision and
    kept strictly below 1.
    """
    u, s = prn_kernel(np.uint64(int(state) & MASK))
    return float(u), int(s)


def skip_ahead(state, n):
    """State after ``n`` steps, in O(log n) multiplications."""
    if n < 0:
        raise ValueError("skip distance must be non-negative")
    return int(skip_kernel(np.uint64(int(state) & MASK), np.uint64(n % MODULUS)))


def init_stream(seed, history):
    """Starting state for global history index ``history``."""
    if history < 0:
        raise ValueError(f"history index must be non-negative, got {history}")
    return int(stream_kernel(np.uint64(int(seed) & MASK), np.uint64(history)))


def batch_stream(seed, batch):
    """Stream reserved for batch-level sampling (source resampling)."""
    return init_stream(seed, BATCH_STREAM_BASE + BATCH_SPACING * batch)
