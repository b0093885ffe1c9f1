import numpy as np
import pytest

from helpers import ZERO_KELVIN, flat_nuclide, oracle_vs_resonant, u238_line
from pincellmc.nucleardata import (
    EnergyOutOfRangeError,
    Material,
    NuclearDataError,
    Nuclide,
    NuclideLibrary,
    Resonance,
    compile_xs,
    macro_xs,
    sigma_pointwise,
    sigma_resonant,
)
from pincellmc.nucleardata.xs import micro_kernel


def stepped_nuclide():
    grid = np.array([1.0, 2.0, 4.0, 8.0])
    return Nuclide("S", 10.0, grid, [1.0, 2.0, 4.0, 3.0], [0.5, 0.25, 0.1, 0.0], [0.0, 0.0, 1.0, 2.0], 2.5)


def test_pointwise_returns_stored_values_at_nodes():
    nuc = stepped_nuclide()
    for i, e in enumerate(nuc.grid):
        s, g, f, nu = sigma_pointwise(nuc, e)
        assert (s, g, f, nu) == (nuc.sigma_s[i], nuc.sigma_g[i], nuc.sigma_f[i], nuc.nu[i])


def test_pointwise_midpoint_is_linear():
    s, g, f, _ = sigma_pointwise(stepped_nuclide(), 3.0)
    assert s == pytest.approx(3.0)
    assert g == pytest.approx(0.175)
    assert f == pytest.approx(0.5)


@pytest.mark.parametrize("e", [0.5, 8.5])
def test_pointwise_out_of_range_names_nuclide(e):
    with pytest.raises(EnergyOutOfRangeError, match="S"):
        sigma_pointwise(stepped_nuclide(), e)


def test_resonant_out_of_range():
    with pytest.raises(EnergyOutOfRangeError):
        sigma_resonant(u238_line(), 1.0e-3, 300.0)


def test_cold_peak_is_slbw_peak():
    nuc = u238_line()
    r = nuc.resonances[0]
    sigma0 = 2.608e6 * r.g * (r.Gamma_n / r.Gamma) / r.E0
    sg, sf = sigma_resonant(nuc, r.E0, ZERO_KELVIN)
    assert sg == pytest.approx(sigma0 * r.Gamma_g / r.Gamma, rel=1e-3)
    assert sf == 0.0


def test_peak_decreases_with_temperature():
    nuc = u238_line()
    e = np.linspace(6.5, 6.85, 2001)
    peaks = [sigma_resonant(nuc, e, T)[0].max() for T in (300.0, 600.0, 900.0, 1200.0)]
    assert all(a > b for a, b in zip(peaks, peaks[1:]))


def test_hotter_peak_is_lower():
    nuc = u238_line()
    assert sigma_resonant(nuc, 6.674, 900.0)[0] < sigma_resonant(nuc, 6.674, 300.0)[0]


def test_array_input_matches_scalar():
    nuc = u238_line()
    e = np.array([2.0, 6.674, 7.0])
    sg, sf = sigma_resonant(nuc, e, 600.0)
    assert sg.shape == (3,)
    assert sg[1] == sigma_resonant(nuc, 6.674, 600.0)[0]


def test_psi_method_close_to_exact_at_peak():
    nuc = u238_line()
    exact = sigma_resonant(nuc, 6.674, 600.0)[0]
    psi = sigma_resonant(nuc, 6.674, 600.0, method="psi")[0]
    assert psi == pytest.approx(exact, rel=0.02)


def test_bad_temperature_and_method():
    with pytest.raises(ValueError):
        sigma_resonant(u238_line(), 6.674, 0.0)
    with pytest.raises(ValueError):
        sigma_resonant(u238_line(), 6.674, 300.0, method="voigt")


@pytest.mark.slow
def test_u238_line_matches_oracle_at_600k():
    e = np.linspace(1.0, 20.0, 2000)
    ref, got = oracle_vs_resonant(u238_line(), 600.0, e, 0)
    mask = ref > 1.0
    assert mask.sum() > 50
    assert np.max(np.abs(got[mask] / ref[mask] - 1.0)) < 5e-3


def test_macro_unit_conversion():
    nuc = flat_nuclide("A", s=15.0, g=5.0)
    mat = Material(0, (("A", 0.05),), 300.0)
    m = macro_xs(mat, NuclideLibrary([nuc]), 1.0)
    assert m.total == pytest.approx(1.0)
    assert m.scatter == pytest.approx(0.75)
    assert m.absorb == pytest.approx(0.25)


def test_macro_is_linear(library):
    e = 6.5
    one = macro_xs(Material(0, (("U238", 0.02),), 900.0), library, e)
    two = macro_xs(Material(0, (("H1", 0.05),), 900.0), library, e)
    both = macro_xs(Material(0, (("U238", 0.02), ("H1", 0.05)), 900.0), library, e)
    for field in ("total", "scatter", "absorb", "fission", "nu_fission"):
        assert getattr(both, field) == pytest.approx(getattr(one, field) + getattr(two, field), rel=1e-12)


def test_macro_outside_grid_errors():
    lib = NuclideLibrary([flat_nuclide("A", grid=[1.0, 10.0]), flat_nuclide("B", grid=[20.0, 30.0])])
    with pytest.raises(EnergyOutOfRangeError):
        macro_xs(Material(0, (("A", 0.1), ("B", 0.1)), 300.0), lib, 5.0)


def test_hashed_lookup_agrees_with_python_path(library):
    xs = compile_xs(library)
    rng = np.random.default_rng(3)
    for e in np.exp(rng.uniform(np.log(1.0e-5), np.log(2.0e7), 2000)):
        for n, name in enumerate(library.names):
            s, g, f, nu = micro_kernel(xs, n, e, 600.0)
            ref_s, _, _, ref_nu = sigma_pointwise(library[name], e)
            ref_g, ref_f = sigma_resonant(library[name], e, 600.0)
            assert (s, nu) == (ref_s, ref_nu)
            assert g == pytest.approx(ref_g, rel=1e-13, abs=1e-300)
            assert f == pytest.approx(ref_f, rel=1e-13, abs=1e-300)


def test_library_round_trip(tmp_path, library):
    path = tmp_path / "lib.json"
    library.save(path)
    back = NuclideLibrary.load(path)
    assert back.names == library.names
    for name in library.names:
        a, b = library[name], back[name]
        assert a.A == b.A and a.resonances == b.resonances
        for attr in ("grid", "sigma_s", "sigma_g", "sigma_f", "nu"):
            np.testing.assert_array_equal(getattr(a, attr), getattr(b, attr))


def test_builtin_library_contents(library):
    assert set(library.names) >= {"H1", "O16", "U235", "U238"}
    assert library["U235"].fissionable and not library["H1"].fissionable
    assert any(abs(r.E0 - 6.674) < 1e-9 for r in library["U238"].resonances)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(E0=-1.0, Gamma_n=1e-3, Gamma_g=0.02),
        dict(E0=1.0, Gamma_n=0.0, Gamma_g=0.02),
        dict(E0=1.0, Gamma_n=1e-3, Gamma_g=0.02, g=1.5),
    ],
)
def test_bad_resonance_rejected(kwargs):
    with pytest.raises(NuclearDataError):
        Resonance(**kwargs)


def test_bad_grid_rejected():
    with pytest.raises(NuclearDataError):
        Nuclide("bad", 1.0, [2.0, 1.0], [1, 1], [1, 1], [0, 0], 0.0)
