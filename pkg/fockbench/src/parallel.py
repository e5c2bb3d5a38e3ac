"""Thread pool used for independent field evaluations."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Pool size: FOCKBENCH_THREADS when set, else the CPU count."""
    raw = os.getenv("FOCKBENCH_THREADS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            logger.warning("Ignoring non-integer FOCKBENCH_THREADS=%r", raw)
        else:
            if value > 0:
                return value
            logger.warning("Ignoring non-positive FOCKBENCH_THREADS=%r", raw)
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Map fn over items; results come back in input order."""
    workers = min(worker_count(), max(len(items), 1))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
