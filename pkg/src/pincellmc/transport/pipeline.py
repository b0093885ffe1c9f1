"""History-based and event-based drivers over a particle bank.

Work is split into contiguous index chunks, one per worker thread; the
kernels release the GIL.  Per-particle results never depend on the split.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import sorting
from . import kernels
from .bank import ALIVE


class Engine:
    """Compiled problem data plus a worker pool."""

    def __init__(self, xs, geom, params, workers=1):
        self.xs = xs
        self.geom = geom
        self.params = params
        self.workers = int(workers)
        self._pool = ThreadPoolExecutor(self.workers) if self.workers > 1 else None
        self.stage_seconds = {"source": 0.0, "transport": 0.0, "lookup": 0.0, "advance": 0.0,
                              "collide": 0.0, "sort": 0.0}
        self.pipeline_iterations = 0

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _chunks(self, n):
        k = max(1, min(self.workers, n))
        edges = np.linspace(0, n, k + 1).astype(np.int64)
        return [(int(edges[j]), int(edges[j + 1])) for j in range(k) if edges[j + 1] > edges[j]]

    def parallel(self, func, n, *args):
        chunks = self._chunks(n)
        if self._pool is None or len(chunks) == 1:
            for lo, hi in chunks:
                func(lo, hi, *args)
            return
        futures = [self._pool.submit(func, lo, hi, *args) for lo, hi in chunks]
        for f in futures:
            f.result()

    # -- source ----------------------------------------------------------

    def init_source(self, bank, seed, batch, n, sites, src_radius):
        first = sites is None
        src = np.zeros((0, 3)) if first else sites
        t0 = time.perf_counter()
        self.parallel(
            lambda lo, hi: kernels.init_source(
                bank.real, bank.int, lo, hi, np.int64(seed), np.int64(batch), np.int64(n), first, src,
                float(src_radius), self.geom, self.params,
            ),
            n,
        )
        self.stage_seconds["source"] += time.perf_counter() - t0

    # -- pipelines ---------------------------------------------------------

    def run_history_based(self, bank):
        """Each particle runs to completion before the next."""
        xs, g, p = self.xs, self.geom, self.params
        t0 = time.perf_counter()
        self.parallel(lambda lo, hi: kernels.run_histories(bank.real, bank.int, lo, hi, xs, g, p), bank.count)
        self.stage_seconds["transport"] += time.perf_counter() - t0

    def run_event_based(self, bank, strategy="none"):
        """Stage-by-stage passes over the live particles until all are done.

        Each pass optionally sorts (and always compacts) the live particles,
        then runs cross-section lookup, advance and collision stages.
        """
        strategy = sorting.SortStrategy.parse(strategy)
        xs, g, p = self.xs, self.geom, self.params
        st = self.stage_seconds
        n_live = int(np.count_nonzero(bank.status == ALIVE))
        n_scan = bank.count
        t_begin = time.perf_counter()
        while True:
            _, n_live, dt = sorting.sort_bank(bank, strategy, n_scan)
            st["sort"] += dt
            if n_live == 0:
                break
            n_scan = n_live
            self.pipeline_iterations += 1
            t0 = time.perf_counter()
            self.parallel(lambda lo, hi: kernels.stage_lookup(bank.real, bank.int, lo, hi, xs, p), n_live)
            t1 = time.perf_counter()
            self.parallel(lambda lo, hi: kernels.stage_advance(bank.real, bank.int, lo, hi, g, p), n_live)
            t2 = time.perf_counter()
            self.parallel(lambda lo, hi: kernels.stage_collide(bank.real, bank.int, lo, hi, xs), n_live)
            t3 = time.perf_counter()
            st["lookup"] += t1 - t0
            st["advance"] += t2 - t1
            st["collide"] += t3 - t2
        st["transport"] += time.perf_counter() - t_begin
