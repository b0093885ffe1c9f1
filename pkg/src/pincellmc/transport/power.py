"""k-eigenvalue power iteration over batches of histories."""

from __future__ import annotations

import hashlib
import logging
import math
import platform
import time
from datetime import datetime, timezone

import numpy as np

from ..nucleardata import E_MAX
from ..nucleardata.xs import compile_xs
from ..rng import STRIDE, batch_stream
from ..tally import BatchResult, RunResult, batch_keff, mean_std
from .bank import CUT_ENERGY, CUT_FLIGHT, LOST_GEOMETRY, allocate_bank, particle_view
from .kernels import PhysicsParams, resample_sites
from .physics import WATT_A, WATT_B
from .pipeline import Engine

__all__ = ["SubcriticalCollapse", "TransportError", "power_iteration", "BatchOutcome", "transport_batch"]

log = logging.getLogger(__name__)


class SubcriticalCollapse(RuntimeError):
    def __init__(self, batch):
        super().__init__(f"subcritical collapse: fission bank empty after batch {batch}")
        self.batch = batch


class TransportError(RuntimeError):
    """A particle could not be tracked; carries its full state."""

    def __init__(self, batch, particle):
        super().__init__(f"batch {batch}: {particle.status} for particle {particle}")
        self.batch = batch
        self.particle = particle


class BatchOutcome:
    """Per-history results of one batch, in canonical (history) order."""

    def __init__(self, bank, batch, n):
        order = np.argsort(bank.hist - batch * n, kind="stable")
        self.history = bank.hist[order]
        self.tracklength = bank.trk_nuf[order]
        self.absorbed = bank.w_abs[order]
        self.cutoff = bank.w_cut[order]
        self.status = bank.status[order]
        self.draws = bank.draws[order]
        self.collisions = bank.collisions[order]
        self.flights = bank.flights[order]
        counts = bank.n_sites[order]
        self.site_counts = counts
        self.sites = np.column_stack(
            [np.repeat(bank.sx[order], counts), np.repeat(bank.sy[order], counts), np.repeat(bank.sz[order], counts)]
        )
        self.site_origin = np.repeat(self.history, counts)

    @property
    def nu_fission(self):
        return math.fsum(self.tracklength)

    def digest(self):
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.sites).tobytes())
        h.update(np.ascontiguousarray(self.site_origin).tobytes())
        return h.hexdigest()[:16]


def physics_params(config):
    return PhysicsParams(float(config.energy_cutoff), int(config.flight_cutoff), E_MAX, WATT_A, WATT_B)


def transport_batch(engine, problem, config, batch, sites):
    """Source, transport and canonical reduction for one batch."""
    n = config.particles
    bank = allocate_bank(n)
    engine.init_source(bank, config.seed, batch, n, sites, problem.source_radius)
    if config.mode == "history":
        engine.run_history_based(bank)
    else:
        engine.run_event_based(bank, config.strategy)
    lost = np.flatnonzero(bank.status >= LOST_GEOMETRY)
    if lost.size:
        raise TransportError(batch, particle_view(bank, int(lost[0])))
    return BatchOutcome(bank, batch, n)


def power_iteration(config, problem=None, progress=None) -> RunResult:
    """Run ``config.batches`` generations and collect track-length k."""
    config.validate()
    from ..config import load_problem  # config imports sorting, which imports this package

    problem = load_problem(problem if problem is not None else config.problem)
    xs = compile_xs(problem.library, problem.materials)
    n = config.particles
    counters = {"energy_cutoffs": 0, "flight_cutoffs": 0, "stream_overlaps": 0, "max_draws": 0,
                "collisions": 0, "flights": 0}
    batches = []
    sites = None
    started = datetime.now(timezone.utc)
    t_wall = time.perf_counter()
    with Engine(xs, problem.geometry.data, physics_params(config), config.workers) as engine:
        for b in range(config.batches):
            out = transport_batch(engine, problem, config, b, sites)
            nuf = out.nu_fission
            k = batch_keff(nuf, float(n))
            counters["energy_cutoffs"] += int(np.count_nonzero(out.status == CUT_ENERGY))
            counters["flight_cutoffs"] += int(np.count_nonzero(out.status == CUT_FLIGHT))
            counters["stream_overlaps"] += int(np.count_nonzero(out.draws > STRIDE))
            counters["max_draws"] = max(counters["max_draws"], int(out.draws.max()))
            counters["collisions"] += int(out.collisions.sum())
            counters["flights"] += int(out.flights.sum())
            batches.append(
                BatchResult(
                    index=b,
                    active=b >= config.inactive,
                    k=k,
                    launched_weight=float(n),
                    nu_fission_tracklength=nuf,
                    absorbed_weight=math.fsum(out.absorbed),
                    cutoff_weight=math.fsum(out.cutoff),
                    fission_sites=int(out.sites.shape[0]),
                    bank_digest=out.digest(),
                )
            )
            if out.sites.shape[0] == 0:
                raise SubcriticalCollapse(b)
            idx, _ = resample_sites(out.sites, n, np.uint64(batch_stream(config.seed, b)))
            sites = np.ascontiguousarray(out.sites[idx])
            if progress is not None:
                progress(batches[-1])
        stage = dict(engine.stage_seconds)
        iterations = engine.pipeline_iterations
    wall = time.perf_counter() - t_wall

    active = [r.k for r in batches if r.active]
    k_mean, k_sigma = mean_std(active)
    histories = n * config.batches
    t_transport = stage["transport"] + stage["source"]
    throughput = {
        "histories": histories,
        "particles_per_second": histories / t_transport if t_transport > 0 else float("nan"),
        "particles_per_second_excluding_sort": (
            histories / (t_transport - stage["sort"]) if t_transport > stage["sort"] else float("nan")
        ),
        "pipeline_iterations": iterations,
    }
    metadata = {
        "started": started.isoformat(),
        "wall_seconds": wall,
        "host": platform.node(),
        "python": platform.python_version(),
        "power_measurement": "out of scope: no hardware power counters are read",
    }
    return RunResult(
        batches=batches,
        k_mean=k_mean,
        k_sigma=k_sigma,
        throughput=throughput,
        stage_seconds=stage,
        counters=counters,
        config=config.echo(),
        problem=problem.describe(),
        metadata=metadata,
    )
