"""Deterministic worker-pool helper.

All parallelizable operations funnel through :func:`parallel_map`, which
preserves input order, so results are identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

ENV_THREADS = "TRBM_THREADS"


def default_threads() -> int:
    value = os.environ.get(ENV_THREADS, "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence, threads: int = 1) -> list:
    """Order-preserving map, optionally fanned out over processes."""
    items = list(items)
    if threads <= 1 or len(items) < 4 * threads:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (threads * 8))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
