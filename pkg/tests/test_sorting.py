from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pincellmc.sorting import SortKey, SortStrategy, energy_bits, make_key, sort_bank, sort_permutation
from pincellmc.transport import allocate_bank
from pincellmc.transport.bank import ABSORBED, ALIVE


def particle(material, energy):
    return SimpleNamespace(material=material, energy=energy)


def test_none_key_is_constant():
    assert make_key(particle(3, 1.0e6), "none") == SortKey(0, 0)


def test_material_key_orders_materials():
    keys = sorted([make_key(particle(2, 1.0), "material"), make_key(particle(0, 5.0), "material")])
    assert keys[0].material == 0


def test_energy_key_monotone_within_material():
    lo = make_key(particle(1, 1.0), "material_energy")
    hi = make_key(particle(1, 1.0e6), "material_energy")
    assert lo < hi


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=2, max_size=50))
def test_energy_bits_preserve_order(values):
    bits = [energy_bits(v) for v in values]
    for a, b, ba, bb in zip(values, values[1:], bits, bits[1:]):
        if a < b:
            assert ba < bb
        elif a > b:
            assert ba > bb


@pytest.mark.parametrize("name", ["none", "material", "energy", "material-energy", "material+energy", "MATERIAL_ENERGY"])
def test_strategy_parsing(name):
    assert isinstance(SortStrategy.parse(name), SortStrategy)


def test_unknown_strategy():
    with pytest.raises(ValueError, match="unknown sort strategy"):
        SortStrategy.parse("random")


def fill(n, mats, energies, status=None):
    bank = allocate_bank(n)
    bank.mat[:] = mats
    bank.E[:] = energies
    bank.hist[:] = np.arange(n)
    if status is not None:
        bank.status[:] = status
    return bank


@pytest.mark.parametrize("strategy", list(SortStrategy))
def test_sorted_bank_gives_identity(strategy):
    bank = fill(6, [0, 0, 1, 1, 2, 2], [0.5, 1.0, 2.0, 3.0, 4.0, 9.0])
    perm, n_alive, _ = sort_bank(bank, strategy)
    np.testing.assert_array_equal(perm, np.arange(6))
    assert n_alive == 6


def test_none_only_compacts():
    status = [ALIVE, ABSORBED, ALIVE, ABSORBED, ALIVE]
    bank = fill(5, [3, 2, 1, 0, 0], [5.0, 4.0, 3.0, 2.0, 1.0], status)
    perm, n_alive, _ = sort_bank(bank, "none")
    np.testing.assert_array_equal(perm, [0, 2, 4, 1, 3])
    assert n_alive == 3
    np.testing.assert_array_equal(bank.hist, [0, 2, 4, 1, 3])


@pytest.mark.parametrize("strategy", ["energy", "material_energy"])
def test_reverse_keys_give_reversal(strategy):
    bank = fill(5, [0] * 5, [5.0, 4.0, 3.0, 2.0, 1.0])
    perm, _, _ = sort_bank(bank, strategy)
    np.testing.assert_array_equal(perm, [4, 3, 2, 1, 0])
    np.testing.assert_array_equal(bank.E, [1.0, 2.0, 3.0, 4.0, 5.0])


def test_material_then_energy_and_stability():
    mats = np.array([1, 0, 1, 0, 1])
    energies = np.array([2.0, 3.0, 1.0, 3.0, 2.0])
    perm, _ = sort_permutation(np.zeros(5, dtype=np.int64), mats, energies, "material_energy")
    np.testing.assert_array_equal(perm, [1, 3, 2, 0, 4])
    perm, _ = sort_permutation(np.zeros(5, dtype=np.int64), mats, energies, "material")
    np.testing.assert_array_equal(perm, [1, 3, 0, 2, 4])


def test_sort_moves_every_column_together():
    rng = np.random.default_rng(0)
    bank = fill(50, rng.integers(0, 3, 50), rng.random(50))
    bank.x[:] = bank.hist * 10.0
    sort_bank(bank, "material_energy")
    np.testing.assert_array_equal(bank.x, bank.hist * 10.0)
    assert sorted(bank.hist.tolist()) == list(range(50))
