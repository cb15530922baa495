"""Deterministic fan-out helper for the embarrassingly parallel sweeps.

Results must not depend on the worker count, so work is always split into
an order-preserving map over a fixed item list; workers=1 stays in-process.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def parallel_map(fn, items, workers: int = 1, chunksize: int | None = None) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    if chunksize is None:
        chunksize = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))
