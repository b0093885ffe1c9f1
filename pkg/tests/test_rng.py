import numpy as np
import pytest

from pincellmc import rng
from pincellmc.rng import MODULUS, MULTIPLIER, STRIDE, init_stream, prn, skip_ahead
from pincellmc.rng import next_state

# (2806196910506780709 * 1 + 1) mod 2**63, exact integer arithmetic
STATE_AFTER_ONE = 2806196910506780710


def step_loop(state, n):
    s = np.uint64(state)
    for _ in range(n):
        s = next_state(s)
    return int(s)


def test_first_step_from_one():
    assert (MULTIPLIER + 1) % MODULUS == STATE_AFTER_ONE
    u, s = prn(1)
    assert s == STATE_AFTER_ONE
    assert u == pytest.approx(STATE_AFTER_ONE / MODULUS, rel=1e-7)


def test_skip_zero_is_identity():
    assert skip_ahead(12345, 0) == 12345


@pytest.mark.parametrize("n", [1, 2, 7, 1000, 10**6])
def test_skip_matches_loop(n):
    assert skip_ahead(987654321, n) == step_loop(987654321, n)


@pytest.mark.slow
def test_skip_matches_loop_ten_million():
    assert skip_ahead(1, 10**7) == step_loop(1, 10**7)


def test_streams_are_stride_apart():
    seed = 42
    assert init_stream(seed, 0) == seed
    assert init_stream(seed, 1) != init_stream(seed, 0)
    for k in (1, 5, 1000):
        assert init_stream(seed, k) == skip_ahead(seed, k * STRIDE)


def test_negative_arguments_rejected():
    with pytest.raises(ValueError):
        skip_ahead(1, -1)
    with pytest.raises(ValueError):
        init_stream(1, -1)


def test_batch_streams_are_disjoint_from_histories():
    assert rng.batch_stream(1, 0) == init_stream(1, rng.BATCH_STREAM_BASE)
    assert rng.batch_stream(1, 1) == init_stream(1, rng.BATCH_STREAM_BASE + rng.BATCH_SPACING)


def test_uniforms_in_unit_interval_and_flat():
    s = 7
    u = np.empty(100_000)
    for i in range(u.size):
        u[i], s = prn(s)
    assert u.min() >= 0.0 and u.max() < 1.0
    counts, _ = np.histogram(u, bins=20, range=(0, 1))
    expected = u.size / 20
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < 45.0  # 19 dof, p ~ 1e-3


def test_uniform_never_reaches_one():
    u, _ = prn((MODULUS - 1 - 1) * pow(MULTIPLIER, -1, MODULUS) % MODULUS)
    assert u < 1.0
