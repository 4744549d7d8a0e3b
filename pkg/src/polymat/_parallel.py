"""Process-pool helper.

Results are always merged in input order, so varying the worker count can
change timing only, never any reported value or witness.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

ENV_WORKERS = "POLYMAT_WORKERS"


def resolve_workers(value=None) -> int:
    if value is not None:
        return max(1, int(value))
    env = os.environ.get(ENV_WORKERS)
    if env:
        return max(1, int(env))
    return 1


def pmap(fn, items, workers=1):
    """map() preserving input order, optionally across processes."""
    items = list(items)
    workers = max(1, int(workers))
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
