"""Command-line interface: ``pincellmc run | bench | compare | xs-dump``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, parse_config
from .nucleardata import EnergyOutOfRangeError, builtin_library, sigma_pointwise, sigma_resonant
from .nucleardata.library import NuclideLibrary
from .problems import BUILTIN_PROBLEMS
from .sorting import SortStrategy
from .tally import doppler_coefficient, format_value_sigma
from .transport import SubcriticalCollapse, TransportError, power_iteration

__all__ = ["main", "bench", "BenchMismatch", "write_results", "check_consistent"]

log = logging.getLogger("pincellmc")

BATCH_COLUMNS = (
    "batch", "active", "k", "nu_fission_tracklength", "launched_weight",
    "absorbed_weight", "cutoff_weight", "fission_sites", "bank_digest",
)
BENCH_COLUMNS = ("strategy", "particles_per_sec", "relative_excl_sort", "relative_incl_sort")


class BenchMismatch(RuntimeError):
    """Sorting strategies disagreed on a physics result."""


def write_results(result, output):
    """Write ``<output>.csv`` (one row per batch) and ``<output>.json``."""
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    csv_path = output.with_name(output.name + ".csv")
    json_path = output.with_name(output.name + ".json")
    with csv_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BATCH_COLUMNS)
        for b in result.batches:
            w.writerow([
                b.index, int(b.active), repr(b.k), repr(b.nu_fission_tracklength), repr(b.launched_weight),
                repr(b.absorbed_weight), repr(b.cutoff_weight), b.fission_sites, b.bank_digest,
            ])
    json_path.write_text(json.dumps(result.summary(), indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def summary_line(result):
    tp = result.throughput
    return (
        f"k = {format_value_sigma(result.k_mean, result.k_sigma)}  "
        f"throughput = {tp['particles_per_second']:.0f} p/s "
        f"(sort-excluded {tp['particles_per_second_excluding_sort']:.0f} p/s)"
    )


def check_consistent(results):
    """Raise :class:`BenchMismatch` unless every run has the same per-batch
    k values and fission-bank digests as the first."""
    items = list(results.items())
    ref_name, ref = items[0]
    for name, res in items[1:]:
        for a, b in zip(ref.batches, res.batches):
            if a.k != b.k or a.bank_digest != b.bank_digest:
                raise BenchMismatch(
                    f"strategy {name} disagrees with {ref_name} in batch {a.index}: "
                    f"k {b.k!r} vs {a.k!r}"
                )
        if len(ref.batches) != len(res.batches):
            raise BenchMismatch(f"strategy {name} ran {len(res.batches)} batches, {ref_name} {len(ref.batches)}")


def bench(config, strategies=tuple(SortStrategy), repeats=1):
    """Run each sorting strategy on the event pipeline; return CSV rows.

    Throughput is relative to the first strategy (``none`` by default).
    With ``repeats > 1`` the strategies are run round-robin and the best
    timing of each is kept, which damps interference from other load.
    """
    strategies = [SortStrategy.parse(s) for s in strategies]
    runs = {}
    best = {}
    config.mode = "event"
    for rep in range(repeats):
        for s in strategies:
            config.sort = s.value
            res = power_iteration(config)
            runs[s.cli_name if rep == 0 else f"{s.cli_name}#{rep}"] = res
            tp = res.throughput
            excl, incl = tp["particles_per_second_excluding_sort"], tp["particles_per_second"]
            prev = best.get(s.cli_name, (0.0, 0.0))
            best[s.cli_name] = (max(prev[0], excl), max(prev[1], incl))
    check_consistent(runs)
    base_excl, base_incl = best[strategies[0].cli_name]
    rows = [
        {
            "strategy": name,
            "particles_per_sec": incl,
            "particles_per_sec_excl_sort": excl,
            "relative_excl_sort": excl / base_excl,
            "relative_incl_sort": incl / base_incl,
        }
        for name, (excl, incl) in best.items()
    ]
    return rows, runs


def _add_run_flags(p):
    p.add_argument("--config", type=Path, help="YAML config file")
    p.add_argument("--problem", help=f"built-in problem ({', '.join(BUILTIN_PROBLEMS)})")
    p.add_argument("--particles", type=int)
    p.add_argument("--batches", type=int)
    p.add_argument("--inactive", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("history", "event"))
    p.add_argument("--sort", help="none | material | energy | material-energy")
    p.add_argument("--workers", type=int)
    p.add_argument("--energy-cutoff", type=float, dest="energy_cutoff")
    p.add_argument("--flight-cutoff", type=int, dest="flight_cutoff")
    p.add_argument("--output", help="output path prefix")


def _config_from(args):
    keys = ("problem", "particles", "batches", "inactive", "seed", "mode", "sort", "workers",
            "energy_cutoff", "flight_cutoff", "output")
    return parse_config(args.config, **{k: getattr(args, k, None) for k in keys})


def cmd_run(args):
    cfg = _config_from(args)
    result = power_iteration(cfg)
    csv_path, json_path = write_results(result, cfg.output)
    print(summary_line(result))
    log.info("wrote %s and %s", csv_path, json_path)
    return 0


def cmd_bench(args):
    cfg = _config_from(args)
    if args.problem is None and (args.config is None or cfg.problem is None):
        cfg.problem = "pincell-2mat"
    rows, _ = bench(cfg, repeats=args.repeats)
    out = Path(args.csv or (cfg.output + "-bench.csv"))
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BENCH_COLUMNS)
        for r in rows:
            w.writerow([r["strategy"], f"{r['particles_per_sec']:.1f}", f"{r['relative_excl_sort']:.3f}",
                        f"{r['relative_incl_sort']:.3f}"])
    print(f"{'strategy':<16}{'p/s':>10}{'rel. excl. sort':>17}{'rel. incl. sort':>17}")
    for r in rows:
        print(f"{r['strategy']:<16}{r['particles_per_sec']:>10.0f}{r['relative_excl_sort']:>17.3f}"
              f"{r['relative_incl_sort']:>17.3f}")
    log.info("wrote %s", out)
    return 0


def _load_summary(path):
    doc = json.loads(Path(path).read_text())
    try:
        return float(doc["k_mean"]), float(doc["k_sigma"]), float(doc["problem"]["fuel_temperature"])
    except KeyError as exc:
        raise ValueError(f"{path}: not a results file (missing {exc.args[0]})") from None


def cmd_compare(args):
    (k1, s1, t1), (k2, s2, t2) = _load_summary(args.first), _load_summary(args.second)
    if t1 > t2:
        (k1, s1, t1), (k2, s2, t2) = (k2, s2, t2), (k1, s1, t1)
    alpha, sigma = doppler_coefficient(k1, s1, t1, k2, s2, t2)
    print(f"alpha({t1:g} K -> {t2:g} K) = {alpha:.3f} +/- {sigma:.3f} pcm/K")
    return 0


def cmd_xs_dump(args):
    lib = NuclideLibrary.load(args.library) if args.library else builtin_library()
    nuc = lib[args.nuclide]
    lo, hi = nuc.span
    e = np.geomspace(max(args.emin, lo), min(args.emax, hi), args.points)
    sg, sf = sigma_resonant(nuc, e, args.temperature)
    ss = np.array([sigma_pointwise(nuc, x)[0] for x in e])
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(("E", "sigma_s", "sigma_g", "sigma_f"))
        for row in zip(e, ss, sg, sf):
            w.writerow([repr(float(v)) for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="pincellmc", description="Monte Carlo k-eigenvalue pincell transport")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="power iteration; writes <output>.csv and <output>.json")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="compare the four sorting strategies on the event pipeline")
    _add_run_flags(p)
    p.add_argument("--csv", help="bench table path (default <output>-bench.csv)")
    p.add_argument("--repeats", type=int, default=1, help="timing repeats; the best is kept")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compare", help="Doppler coefficient between two results files")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("xs-dump", help="broadened cross sections of one nuclide as CSV")
    p.add_argument("nuclide")
    p.add_argument("--temperature", "-T", type=float, required=True)
    p.add_argument("--library", type=Path)
    p.add_argument("--emin", type=float, default=1.0e-5)
    p.add_argument("--emax", type=float, default=2.0e7)
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_xs_dump)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ConfigError, KeyError, ValueError, EnergyOutOfRangeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SubcriticalCollapse, TransportError, BenchMismatch) as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
