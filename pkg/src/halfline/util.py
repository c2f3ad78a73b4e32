"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["thread_count", "parallel_map"]


def thread_count() -> int:
    """Worker count for batch loops; honors the UTM_THREADS variable."""
    env = os.environ.get("UTM_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def parallel_map(fn, items):
    """Ordered map over items, threaded when UTM_THREADS allows.

    Work items run under numpy, which releases the GIL in inner kernels;
    results are returned in input order so output stays deterministic.
    """
    items = list(items)
    k = thread_count()
    if k <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(k, len(items))) as ex:
        return list(ex.map(fn, items))
