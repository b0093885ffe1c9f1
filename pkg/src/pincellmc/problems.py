"""Problem definitions and the built-in problem set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import VERA_PITCH, VERA_RADII, Pincell
from .nucleardata import E_MAX, E_MIN, Material, Nuclide, NuclideLibrary, builtin_library

__all__ = ["Problem", "BUILTIN_PROBLEMS", "get_problem", "pincell", "infinite_medium"]

MODERATOR_TEMPERATURE = 565.0

# atoms / (barn cm)
FUEL = (("U235", 7.18132e-4), ("U238", 2.21546e-2), ("O16", 4.57642e-2))
GAP = (("O16", 2.68714e-5),)  # thin pure scatterer standing in for helium
CLAD = (("O16", 4.3e-2),)  # zirconium stand-in (no Zr in the library)
MODERATOR = (("H1", 4.96224e-2), ("O16", 2.48112e-2))


@dataclass(frozen=True)
class Problem:
    name: str
    library: NuclideLibrary
    materials: tuple
    geometry: Pincell
    source_region: int = 0

    def __post_init__(self):
        n = len(self.materials)
        for m in self.geometry.region_materials:
            if not 0 <= m < n:
                raise ValueError(f"region material id {m} not among {n} materials")
        for k, mat in enumerate(self.materials):
            if mat.id != k:
                raise ValueError("material ids must be 0..M-1 in order")
            for nuc, _ in mat.densities:
                if nuc not in self.library:
                    raise ValueError(f"material {mat.name or mat.id} uses unknown nuclide {nuc!r}")

    @property
    def source_radius(self):
        """Outer radius of the source region (0 means the whole cell)."""
        r = self.geometry.radii
        if self.source_region < len(r):
            return r[self.source_region]
        return 0.0

    @property
    def fuel_temperature(self):
        return self.materials[self.geometry.region_materials[self.source_region]].temperature

    def describe(self):
        return {
            "name": self.name,
            "fuel_temperature": self.fuel_temperature,
            "pitch": self.geometry.pitch,
            "radii": list(self.geometry.radii),
            "region_materials": list(self.geometry.region_materials),
            "materials": [
                {"name": m.name, "temperature": m.temperature, "nuclides": dict(m.densities)}
                for m in self.materials
            ],
        }


def pincell(fuel_temperature, library=None, name=None):
    """Four-region fresh-fuel pincell (fuel, gap, clad, moderator)."""
    library = library or builtin_library()
    mats = (
        Material(0, FUEL, fuel_temperature, "fuel"),
        Material(1, GAP, MODERATOR_TEMPERATURE, "gap"),
        Material(2, CLAD, MODERATOR_TEMPERATURE, "clad"),
        Material(3, MODERATOR, MODERATOR_TEMPERATURE, "moderator"),
    )
    geom = Pincell(VERA_PITCH, VERA_RADII, (0, 1, 2, 3))
    return Problem(name or f"pincell-{fuel_temperature:g}K", library, mats, geom)


def pincell_two_material(library=None):
    """Fuel rod straight in water: two materials, four nuclides in the fuel."""
    library = library or builtin_library()
    fuel = FUEL + (("H1", 1.0e-3),)
    mats = (
        Material(0, fuel, 900.0, "fuel"),
        Material(1, MODERATOR, MODERATOR_TEMPERATURE, "moderator"),
    )
    geom = Pincell(VERA_PITCH, (VERA_RADII[-1],), (0, 1))
    return Problem("pincell-2mat", library, mats, geom)


def infinite_medium(k_inf=1.25, density=0.1, name="infinite-medium"):
    """Single constant-cross-section nuclide filling a reflective box.

    With constant cross sections k equals nu * sigma_f / sigma_a exactly.
    """
    sigma_s, sigma_g, sigma_f = 2.0, 0.6, 0.4
    nu = k_inf * (sigma_g + sigma_f) / sigma_f
    grid = np.array([E_MIN, E_MAX])
    nuc = Nuclide(
        "X200", 200.0, grid,
        sigma_s=np.full(2, sigma_s), sigma_g=np.full(2, sigma_g), sigma_f=np.full(2, sigma_f),
        nu=nu,
    )
    lib = NuclideLibrary([nuc])
    mats = (Material(0, (("X200", density),), 300.0, "medium"),)
    return Problem(name, lib, mats, Pincell(10.0, (), (0,)))


BUILTIN_PROBLEMS = {
    "pincell-600K": lambda: pincell(600.0),
    "pincell-900K": lambda: pincell(900.0),
    "pincell-1200K": lambda: pincell(1200.0),
    "pincell-2mat": pincell_two_material,
    "infinite-medium": infinite_medium,
}


def get_problem(name):
    try:
        return BUILTIN_PROBLEMS[name]()
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; built-ins: {', '.join(BUILTIN_PROBLEMS)}") from None
