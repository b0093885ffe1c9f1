"""Nuclide, resonance and material records plus the JSON library format.

Library files are JSON documents::

    {
      "format": "pincellmc-nuclides",
      "version": 1,
      "nuclides": [
        {
          "name": "U238",
          "A": 236.0058,
          "grid": [...],            # eV, strictly increasing
          "sigma_s": [...],         # barns, smooth 0 K background
          "sigma_g": [...],
          "sigma_f": [...],
          "nu": 2.6 | [...],        # constant or point-wise
          "resonances": [
            {"E0": 6.674, "Gamma_n": 0.001493, "Gamma_g": 0.023,
             "Gamma_f": 0.0, "g": 1.0}
          ]
        }
      ]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.special import expit

LIBRARY_FORMAT = "pincellmc-nuclides"
LIBRARY_VERSION = 1

# Lower/upper energy bounds shared by every built-in table (eV).
E_MIN = 1.0e-5
E_MAX = 2.0e7


class NuclearDataError(ValueError):
    """Malformed nuclear data."""


class EnergyOutOfRangeError(ValueError):
    """Energy outside a nuclide's tabulated span."""

    def __init__(self, nuclide, energy, lo, hi):
        super().__init__(
            f"energy {energy!r} eV outside the grid of {nuclide} [{lo!r}, {hi!r}] eV"
        )
        self.nuclide = nuclide
        self.energy = energy


@dataclass(frozen=True)
class Resonance:
    E0: float
    Gamma_n: float
    Gamma_g: float
    Gamma_f: float = 0.0
    g: float = 1.0

    def __post_init__(self):
        if not self.E0 > 0:
            raise NuclearDataError(f"resonance energy must be positive, got {self.E0}")
        if self.Gamma_n <= 0 or self.Gamma_g < 0 or self.Gamma_f < 0:
            raise NuclearDataError(f"invalid widths in resonance at {self.E0} eV")
        if not 0 < self.g <= 1:
            raise NuclearDataError(f"spin factor g={self.g} not in (0, 1]")

    @property
    def Gamma(self):
        return self.Gamma_n + self.Gamma_g + self.Gamma_f


@dataclass
class Nuclide:
    """One nuclide: smooth 0 K point-wise tables plus SLBW resonances."""

    name: str
    A: float
    grid: np.ndarray
    sigma_s: np.ndarray
    sigma_g: np.ndarray
    sigma_f: np.ndarray
    nu: np.ndarray
    resonances: list[Resonance] = field(default_factory=list)

    def __post_init__(self):
        self.grid = np.ascontiguousarray(self.grid, dtype=np.float64)
        n = self.grid.size
        if n < 2:
            raise NuclearDataError(f"{self.name}: grid needs at least 2 points")
        if np.any(self.grid <= 0) or np.any(np.diff(self.grid) <= 0):
            raise NuclearDataError(f"{self.name}: grid must be positive and strictly increasing")
        nu = np.asarray(self.nu, dtype=np.float64)
        if nu.ndim == 0:
            nu = np.full(n, float(nu))
        self.nu = np.ascontiguousarray(nu)
        for attr in ("sigma_s", "sigma_g", "sigma_f", "nu"):
            arr = np.ascontiguousarray(getattr(self, attr), dtype=np.float64)
            if arr.shape != (n,):
                raise NuclearDataError(f"{self.name}: {attr} has shape {arr.shape}, expected ({n},)")
            if np.any(arr < 0) or not np.all(np.isfinite(arr)):
                raise NuclearDataError(f"{self.name}: {attr} must be finite and non-negative")
            setattr(self, attr, arr)
        if self.A < 0.9:
            raise NuclearDataError(f"{self.name}: mass ratio A={self.A} below 0.9")
        self.resonances = [r if isinstance(r, Resonance) else Resonance(**r) for r in self.resonances]

    @property
    def span(self):
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def fissionable(self):
        return bool(np.any(self.sigma_f > 0) or any(r.Gamma_f > 0 for r in self.resonances))

    def to_dict(self):
        nu = self.nu
        return {
            "name": self.name,
            "A": self.A,
            "grid": self.grid.tolist(),
            "sigma_s": self.sigma_s.tolist(),
            "sigma_g": self.sigma_g.tolist(),
            "sigma_f": self.sigma_f.tolist(),
            "nu": float(nu[0]) if np.all(nu == nu[0]) else nu.tolist(),
            "resonances": [
                {"E0": r.E0, "Gamma_n": r.Gamma_n, "Gamma_g": r.Gamma_g, "Gamma_f": r.Gamma_f, "g": r.g}
                for r in self.resonances
            ],
        }

    @classmethod
    def from_dict(cls, d):
        known = {"name", "A", "grid", "sigma_s", "sigma_g", "sigma_f", "nu", "resonances"}
        extra = set(d) - known
        if extra:
            raise NuclearDataError(f"unknown nuclide field(s): {sorted(extra)}")
        missing = known - {"resonances"} - set(d)
        if missing:
            raise NuclearDataError(f"nuclide record missing field(s): {sorted(missing)}")
        return cls(
            name=d["name"],
            A=float(d["A"]),
            grid=d["grid"],
            sigma_s=d["sigma_s"],
            sigma_g=d["sigma_g"],
            sigma_f=d["sigma_f"],
            nu=d["nu"],
            resonances=[Resonance(**r) for r in d.get("resonances", [])],
        )


@dataclass(frozen=True)
class Material:
    """Constituents as ``(nuclide name, atoms/(barn cm))`` pairs."""

    id: int
    densities: tuple
    temperature: float
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "densities", tuple((str(n), float(d)) for n, d in self.densities))
        if not self.densities:
            raise NuclearDataError(f"material {self.id} has no constituents")
        for nuc, dens in self.densities:
            if not dens > 0:
                raise NuclearDataError(f"material {self.id}: density of {nuc} must be positive")
        if not self.temperature > 0:
            raise NuclearDataError(f"material {self.id}: temperature must be positive")


class NuclideLibrary:
    """Ordered, immutable-after-load collection of nuclides."""

    def __init__(self, nuclides):
        self._nuclides = {}
        for nuc in nuclides:
            if nuc.name in self._nuclides:
                raise NuclearDataError(f"duplicate nuclide {nuc.name}")
            self._nuclides[nuc.name] = nuc

    def __getitem__(self, name):
        try:
            return self._nuclides[name]
        except KeyError:
            raise KeyError(f"nuclide {name!r} not in library (have {list(self._nuclides)})") from None

    def __contains__(self, name):
        return name in self._nuclides

    def __iter__(self):
        return iter(self._nuclides.values())

    def __len__(self):
        return len(self._nuclides)

    @property
    def names(self):
        return list(self._nuclides)

    def index(self, name):
        return self.names.index(name)

    def to_dict(self):
        return {
            "format": LIBRARY_FORMAT,
            "version": LIBRARY_VERSION,
            "nuclides": [n.to_dict() for n in self],
        }

    @classmethod
    def from_dict(cls, doc):
        if doc.get("format") != LIBRARY_FORMAT:
            raise NuclearDataError(f"not a {LIBRARY_FORMAT} document")
        if doc.get("version") != LIBRARY_VERSION:
            raise NuclearDataError(f"unsupported library version {doc.get('version')!r}")
        return cls(Nuclide.from_dict(d) for d in doc["nuclides"])

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# Built-in four-nuclide library
# ---------------------------------------------------------------------------

# lowest s-wave lines of U238 with roughly evaluated widths (eV)
U238_RESONANCES = (
    Resonance(6.674, 1.493e-3, 0.023, 0.0, 1.0),
    Resonance(20.87, 10.26e-3, 0.0229, 0.0, 1.0),
    Resonance(36.68, 34.13e-3, 0.0229, 0.0, 1.0),
    Resonance(66.03, 24.6e-3, 0.023, 0.0, 1.0),
    Resonance(80.75, 1.865e-3, 0.023, 0.0, 1.0),
    Resonance(102.56, 71.7e-3, 0.023, 0.0, 1.0),
    Resonance(116.85, 25.5e-3, 0.023, 0.0, 1.0),
    Resonance(145.66, 0.86e-3, 0.023, 0.0, 1.0),
    Resonance(165.29, 3.4e-3, 0.023, 0.0, 1.0),
    Resonance(189.67, 174.0e-3, 0.023, 0.0, 1.0),
    Resonance(208.51, 51.7e-3, 0.023, 0.0, 1.0),
)

# statistics of the sampled U238 ladder that continues the table to LADDER_TOP
LADDER_SPACING = 20.9  # mean level spacing, eV
LADDER_STRENGTH = 1.0e-4  # s-wave strength function
LADDER_GAMMA_G = 0.023
LADDER_TOP = 1000.0
LADDER_SEED = 238


def resonance_ladder(start, top=LADDER_TOP, spacing=LADDER_SPACING, strength=LADDER_STRENGTH,
                     gamma_g=LADDER_GAMMA_G, seed=LADDER_SEED):
    """Sample s-wave lines above ``start`` up to ``top`` (eV).

    Spacings follow the Wigner distribution and reduced neutron widths the
    Porter-Thomas (chi-squared, one degree of freedom) distribution; the
    sequence is fixed by ``seed``.
    """
    rng = np.random.default_rng(seed)
    lines = []
    e = start
    while True:
        e += spacing * np.sqrt(-4.0 / np.pi * np.log(1.0 - rng.random()))
        if e > top:
            return tuple(lines)
        gamma_n = strength * spacing * rng.chisquare(1) * np.sqrt(e)
        lines.append(Resonance(round(float(e), 3), float(f"{gamma_n:.4g}"), gamma_g, 0.0, 1.0))


U235_RESONANCES = (
    Resonance(8.77, 1.44e-3, 0.035, 0.10, 0.5625),
    Resonance(19.3, 5.0e-3, 0.040, 0.080, 0.4375),
)

BUILTIN_PATH = "builtin_library.json"


def _one_over_v(energy, sigma_thermal):
    return sigma_thermal * np.sqrt(0.0253 / energy)


def make_builtin_library(points=1500):
    """Construct the built-in library from its analytic smooth backgrounds.

    The shipped JSON file is generated by this function; backgrounds are
    simple fits with roughly realistic magnitudes, not evaluated data.
    """
    e = np.geomspace(E_MIN, E_MAX, points)
    zero = np.zeros_like(e)
    h1 = Nuclide(
        "H1", 0.9992, e,
        sigma_s=20.4 / np.sqrt(1.0 + e / 4.56e4),
        sigma_g=_one_over_v(e, 0.332),
        sigma_f=zero, nu=0.0,
    )
    o16 = Nuclide(
        "O16", 15.858, e,
        sigma_s=3.8 / np.sqrt(1.0 + e / 3.0e6),
        sigma_g=zero, sigma_f=zero, nu=0.0,
    )
    u235 = Nuclide(
        "U235", 233.0248, e,
        sigma_s=np.full_like(e, 11.0),
        sigma_g=_one_over_v(e, 99.0) + 0.1,
        sigma_f=_one_over_v(e, 585.0) + 1.3,
        nu=2.43 + 0.1 * e / 1.0e6,
        resonances=list(U235_RESONANCES),
    )
    u238 = Nuclide(
        "U238", 236.0058, e,
        sigma_s=9.0 / np.sqrt(1.0 + e / 5.0e6),
        sigma_g=_one_over_v(e, 1.45) + 0.05,
        sigma_f=0.55 * expit((e - 1.5e6) / 1.5e5),
        nu=2.6 + 0.1 * e / 1.0e6,
        resonances=list(U238_RESONANCES) + list(resonance_ladder(U238_RESONANCES[-1].E0)),
    )
    return NuclideLibrary([h1, o16, u235, u238])


def builtin_library():
    """Load the shipped built-in library."""
    text = resources.files("pincellmc.data").joinpath(BUILTIN_PATH).read_text()
    return NuclideLibrary.from_dict(json.loads(text))
