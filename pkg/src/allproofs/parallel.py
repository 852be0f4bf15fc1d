"""Worker-thread control for the batchable prover stages.

The native backend releases the GIL, so mapping independent proof batches
onto a thread pool gives real parallel speedup. Results are always
collected in input order, so outputs are byte-identical for any thread
count. Default is single-threaded (the benchmark's measurement mode).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_threads = 1


def set_worker_threads(n: int) -> None:
    global _threads
    if n < 1:
        raise ValueError("thread count must be at least 1")
    _threads = n


def get_worker_threads() -> int:
    return _threads


def pmap(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map preserving order; parallel only when a pool is configured."""
    if _threads == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(_threads, len(items))) as pool:
        return list(pool.map(fn, items))
