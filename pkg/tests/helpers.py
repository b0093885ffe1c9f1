"""Shared builders for the test suite."""

import numpy as np

from pincellmc.nucleardata import Nuclide, Resonance, linearize, sigma1_broaden_oracle, sigma_resonant

ZERO_KELVIN = 1.0e-3


def flat_nuclide(name="X", A=100.0, s=1.0, g=1.0, f=0.0, nu=0.0, grid=None, resonances=()):
    """Nuclide with constant background cross sections."""
    grid = np.geomspace(1.0e-5, 2.0e7, 200) if grid is None else np.asarray(grid, dtype=float)
    one = np.ones_like(grid)
    return Nuclide(name, A, grid, s * one, g * one, f * one, nu, list(resonances))


def resonance_only(nuclide):
    """Copy of ``nuclide`` with its smooth background removed."""
    zero = np.zeros_like(nuclide.grid)
    return Nuclide(nuclide.name, nuclide.A, nuclide.grid, zero, zero, zero, nuclide.nu, list(nuclide.resonances))


def u238_line():
    """Single 6.674 eV capture resonance on a bare grid."""
    return Nuclide(
        "U238-line", 236.0058, np.geomspace(0.1, 100.0, 400),
        np.zeros(400), np.zeros(400), np.zeros(400), 0.0,
        [Resonance(6.674, 1.493e-3, 0.023, 0.0, 1.0)],
    )


def resonance_probe(nuclide, T, per_line=41, base=2000):
    """Energies covering every line of ``nuclide``: a log grid over the
    resolved range plus a dense patch across each line centre."""
    e0 = np.array([r.E0 for r in nuclide.resonances])
    width = np.array([r.Gamma for r in nuclide.resonances]) + np.sqrt(4 * e0 * 8.617333262e-5 * T / nuclide.A)
    patches = [np.linspace(e - 4 * w, e + 4 * w, per_line) for e, w in zip(e0, width)]
    return np.unique(np.concatenate([np.geomspace(1.0, 1.05 * e0.max(), base), *patches]))


def cold_table(nuclide, channel, table_lo=0.5, table_hi=None):
    """Lin-lin table of the near-0 K resonance line shape for ``channel``
    0 (capture) or 1 (fission), smooth background removed."""
    nuc = resonance_only(nuclide)
    if table_hi is None:
        table_hi = max(100.0, 1.2 * max(r.E0 for r in nuc.resonances))

    def cold(e):
        return sigma_resonant(nuc, e, ZERO_KELVIN)[channel]

    return linearize(cold, np.geomspace(table_lo, table_hi, 400), rtol=1e-4, atol=1e-6)


def oracle_vs_resonant(nuclide, T, energies, channel, table=None):
    """Broaden the near-0 K table with the oracle and compare.

    Returns ``(reference, broadened)`` at ``energies``.
    """
    grid, sigma0 = table if table is not None else cold_table(nuclide, channel)
    nuc = resonance_only(nuclide)
    reference = sigma1_broaden_oracle(grid, sigma0, T, nuc.A, energies=energies)
    return reference, sigma_resonant(nuc, energies, T)[channel]
