"""Order-preserving map over work items, in a process pool when asked."""

import logging
import multiprocessing as mp
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Apply ``fn`` to every item and return results in input order.

    ``fn`` must be a module-level function when ``workers > 1``.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(workers, len(items))
    logger.debug("mapping %d items over %d workers", len(items), workers)
    with mp.Pool(workers) as pool:
        return pool.map(fn, items)
