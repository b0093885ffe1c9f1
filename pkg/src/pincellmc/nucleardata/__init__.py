"""Nuclear data: nuclide records, on-the-fly Doppler broadening, lookups."""

from .faddeeva import faddeeva_w, psi_chi
from .library import (
    E_MAX,
    E_MIN,
    EnergyOutOfRangeError,
    Material,
    NuclearDataError,
    Nuclide,
    NuclideLibrary,
    Resonance,
    builtin_library,
    make_builtin_library,
)
from .oracle import linearize, sigma1_broaden_oracle
from .xs import K_BOLTZMANN, MacroXS, XSData, compile_xs, macro_xs, sigma_pointwise, sigma_resonant

__all__ = [
    "E_MAX",
    "E_MIN",
    "EnergyOutOfRangeError",
    "K_BOLTZMANN",
    "MacroXS",
    "Material",
    "NuclearDataError",
    "Nuclide",
    "NuclideLibrary",
    "Resonance",
    "XSData",
    "builtin_library",
    "compile_xs",
    "faddeeva_w",
    "linearize",
    "macro_xs",
    "make_builtin_library",
    "psi_chi",
    "sigma1_broaden_oracle",
    "sigma_pointwise",
    "sigma_resonant",
]
