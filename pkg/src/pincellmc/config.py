"""Run configuration: YAML documents with command-line overrides.

Schema (version 1)::

    version: 1
    problem: pincell-600K        # a built-in name, or an inline block:
    # problem:
    #   name: my-pin
    #   library: nuclides.json   # optional, defaults to the built-in library
    #   geometry: {pitch: 1.26, radii: [0.4096, 0.418, 0.475],
    #              region_materials: [0, 1, 2, 3]}
    #   materials:
    #     - {name: fuel, temperature: 600,
    #        nuclides: {U235: 7.18e-4, U238: 2.215e-2, O16: 4.576e-2}}
    run:
      particles: 131072
      batches: 1200
      inactive: 200
      seed: 1
      mode: history             # history | event
      sort: none                # none | material | energy | material-energy
      workers: 1
      energy_cutoff: 1.0e-4     # eV
      flight_cutoff: 100000
    output: results             # writes results.csv and results.json
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from pathlib import Path

import yaml

from .geometry import Pincell
from .nucleardata import Material, NuclideLibrary, builtin_library
from .problems import BUILTIN_PROBLEMS, Problem, get_problem
from .sorting import SortStrategy

__all__ = ["RunConfig", "ConfigError", "parse_config", "load_problem"]

CONFIG_VERSION = 1
MODES = ("history", "event")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: object = None
    particles: int = 10000
    batches: int = 120
    inactive: int = 20
    seed: int = 1
    mode: str = "history"
    sort: str = "none"
    workers: int = 1
    energy_cutoff: float = 1.0e-4
    flight_cutoff: int = 100_000
    output: str = "results"

    def validate(self):
        if self.problem is None:
            raise ConfigError(f"problem: missing; built-ins are {', '.join(BUILTIN_PROBLEMS)}")
        if isinstance(self.problem, str) and self.problem not in BUILTIN_PROBLEMS:
            raise ConfigError(f"problem: unknown {self.problem!r}; built-ins are {', '.join(BUILTIN_PROBLEMS)}")
        for name in ("particles", "batches", "inactive", "seed", "workers", "flight_cutoff"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, int):
                raise ConfigError(f"{name}: expected an integer, got {val!r}")
        if self.particles < 100:
            raise ConfigError(f"particles: must be >= 100, got {self.particles}")
        if self.inactive < 1:
            raise ConfigError(f"inactive: must be >= 1, got {self.inactive}")
        if self.batches <= self.inactive:
            raise ConfigError(f"batches: must exceed inactive ({self.inactive}), got {self.batches}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {self.workers}")
        if self.seed < 0:
            raise ConfigError(f"seed: must be non-negative, got {self.seed}")
        if self.mode not in MODES:
            raise ConfigError(f"mode: must be one of {MODES}, got {self.mode!r}")
        try:
            self.sort = SortStrategy.parse(self.sort).value
        except ValueError as exc:
            raise ConfigError(f"sort: {exc}") from None
        if not self.energy_cutoff > 0:
            raise ConfigError("energy_cutoff: must be positive")
        if self.flight_cutoff < 1:
            raise ConfigError("flight_cutoff: must be >= 1")
        return self

    @property
    def strategy(self):
        return SortStrategy.parse(self.sort)

    def echo(self):
        d = asdict(self)
        if not isinstance(d["problem"], (str, type(None))):
            d["problem"] = getattr(self.problem, "name", str(self.problem))
        return d


_RUN_FIELDS = {f.name for f in fields(RunConfig)} - {"problem", "output"}
_TOP_FIELDS = {"version", "problem", "run", "output"}
_PROBLEM_FIELDS = {"name", "library", "geometry", "materials"}


def _check_keys(doc, allowed, where):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected a mapping")
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"{where}.{key}: unknown field" if where else f"{key}: unknown field")


def load_problem(desc, base=Path(".")):
    """Build a :class:`Problem` from a built-in name or an inline block."""
    if isinstance(desc, Problem):
        return desc
    if isinstance(desc, str):
        try:
            return get_problem(desc)
        except KeyError as exc:
            raise ConfigError(f"problem: {exc.args[0]}") from None
    _check_keys(desc, _PROBLEM_FIELDS, "problem")
    lib = builtin_library()
    if desc.get("library"):
        lib = NuclideLibrary.load(base / desc["library"])
    geo = desc.get("geometry") or {}
    _check_keys(geo, {"pitch", "radii", "region_materials"}, "problem.geometry")
    try:
        geometry = Pincell(float(geo["pitch"]), tuple(geo["radii"]), tuple(geo["region_materials"]))
    except KeyError as exc:
        raise ConfigError(f"problem.geometry.{exc.args[0]}: missing") from None
    mats = []
    for k, m in enumerate(desc.get("materials") or []):
        _check_keys(m, {"name", "temperature", "nuclides"}, f"problem.materials[{k}]")
        mats.append(Material(k, tuple(m["nuclides"].items()), float(m["temperature"]), m.get("name", "")))
    try:
        return Problem(desc.get("name", "custom"), lib, tuple(mats), geometry)
    except ValueError as exc:
        raise ConfigError(f"problem: {exc}") from None


def parse_config(path=None, **overrides):
    """Read a config file (optional) and apply non-None ``overrides``."""
    values = {}
    base = Path(".")
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        base = path.parent
        doc = yaml.safe_load(path.read_text()) or {}
        _check_keys(doc, _TOP_FIELDS, "")
        if doc.get("version", CONFIG_VERSION) != CONFIG_VERSION:
            raise ConfigError(f"version: unsupported {doc['version']!r}")
        run = doc.get("run") or {}
        _check_keys(run, _RUN_FIELDS, "run")
        values.update(run)
        if "problem" in doc:
            values["problem"] = doc["problem"]
        if "output" in doc:
            values["output"] = doc["output"]
    for key, val in overrides.items():
        if key not in _RUN_FIELDS | {"problem", "output"}:
            raise ConfigError(f"{key}: unknown field")
        if val is not None:
            values[key] = val
    cfg = RunConfig(**values)
    if isinstance(cfg.problem, dict):
        cfg.problem = load_problem(cfg.problem, base)
    return cfg.validate()
