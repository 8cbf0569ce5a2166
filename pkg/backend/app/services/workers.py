"""
Worker Pools
============
1. Thread pool for the API (CPU-bound calls off the event loop)
2. Process pool for catalog batches (results in submission order)
"""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from functools import partial
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from app.config import WORKERS

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_cpu_executor: Optional[ThreadPoolExecutor] = None


def _executor() -> ThreadPoolExecutor:
    global _cpu_executor
    if _cpu_executor is None:
        _cpu_executor = ThreadPoolExecutor(max_workers=max(WORKERS, 1), thread_name_prefix="strata_worker")
    return _cpu_executor


# =============================================================================
# ASYNC CPU OFFLOADING
# =============================================================================

async def run_cpu_bound(func, *args, **kwargs):
    """Run CPU-bound function in thread pool without blocking event loop."""
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(
        _executor(),
        partial(func, **kwargs) if kwargs else func,
        *args,
    )


def shutdown_executor():
    """Call on application shutdown to clean up thread pool."""
    global _cpu_executor
    if _cpu_executor is not None:
        _cpu_executor.shutdown(wait=True)
        _cpu_executor = None


# =============================================================================
# PROCESS POOL
# =============================================================================

def map_ordered(func: Callable[[T], R], items: Iterable[T], workers: int) -> Iterator[R]:
    """func over items, in input order; runs inline for a single worker."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        for item in items:
            yield func(item)
        return
    logger.debug("dispatching %d items to %d processes", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(func, items, chunksize=max(1, len(items) // (workers * 8)))
