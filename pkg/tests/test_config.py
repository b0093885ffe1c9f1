from pathlib import Path

import pytest

from pincellmc.config import ConfigError, parse_config
from pincellmc.problems import BUILTIN_PROBLEMS, Problem, get_problem

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_cpu_table_values_accepted():
    cfg = parse_config(problem="pincell-600K", particles=131072, batches=1200, inactive=200)
    assert (cfg.particles, cfg.batches, cfg.inactive) == (131072, 1200, 200)


def test_gpu_table_values_accepted():
    cfg = parse_config(problem="pincell-600K", particles=1048576, batches=800, inactive=200)
    assert cfg.particles == 1048576


def test_defaults():
    cfg = parse_config(problem="pincell-900K")
    assert (cfg.mode, cfg.sort, cfg.workers, cfg.seed) == ("history", "none", 1, 1)


def test_inactive_must_be_below_batches():
    with pytest.raises(ConfigError, match="batches"):
        parse_config(problem="pincell-600K", inactive=1200, batches=1200)


def test_missing_problem_lists_builtins():
    with pytest.raises(ConfigError) as info:
        parse_config()
    for name in BUILTIN_PROBLEMS:
        assert name in str(info.value)


@pytest.mark.parametrize(
    "kwargs, field",
    [
        (dict(particles=50), "particles"),
        (dict(workers=0), "workers"),
        (dict(mode="gpu"), "mode"),
        (dict(sort="random"), "sort"),
        (dict(inactive=0), "inactive"),
        (dict(energy_cutoff=-1.0), "energy_cutoff"),
    ],
)
def test_invalid_fields_named(kwargs, field):
    with pytest.raises(ConfigError, match=field):
        parse_config(problem="pincell-600K", **kwargs)


def test_unknown_field_in_file(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("problem: pincell-600K\nrun:\n  particle: 100\n")
    with pytest.raises(ConfigError, match="run.particle"):
        parse_config(path)


def test_flags_override_file(tmp_path):
    cfg = parse_config(CONFIGS / "pincell-600K.yaml", particles=500, batches=10, inactive=3)
    assert (cfg.particles, cfg.batches, cfg.inactive, cfg.problem) == (500, 10, 3, "pincell-600K")


def test_inline_problem(tmp_path):
    cfg = parse_config(CONFIGS / "custom-pin.yaml")
    assert isinstance(cfg.problem, Problem)
    assert cfg.problem.fuel_temperature == 900.0
    assert cfg.sort == "material_energy"


def test_missing_file():
    with pytest.raises(ConfigError, match="does not exist"):
        parse_config("nope.yaml")


def test_builtin_pincells_differ_only_in_fuel_temperature():
    pins = [get_problem(f"pincell-{t}K") for t in (600, 900, 1200)]
    base = pins[0].describe()
    for p, t in zip(pins, (600.0, 900.0, 1200.0)):
        d = p.describe()
        assert d["fuel_temperature"] == t
        d["materials"][0]["temperature"] = base["materials"][0]["temperature"]
        for key in ("pitch", "radii", "region_materials", "materials"):
            assert d[key] == base[key]


def test_two_material_problem_has_four_fuel_nuclides():
    p = get_problem("pincell-2mat")
    assert len(p.materials) == 2
    assert len(p.materials[0].densities) >= 4
