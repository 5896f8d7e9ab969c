# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Worker-count resolution and ordered parallel mapping."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)

WORKERS_ENV = "CUMSTREAM_WORKERS"

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(flag: Optional[int] = None) -> int:
    """Pick the worker count: environment first, then the flag, then CPU count.

    Args:
        flag: Value of the --workers flag, if given

    Returns:
        A positive worker count
    """
    env_value = os.getenv(WORKERS_ENV)
    if env_value:
        try:
            workers = int(env_value)
        except ValueError:
            raise ConfigurationError(f"{WORKERS_ENV} must be an integer, got {env_value!r}")
        logger.debug("Worker count %d taken from %s", workers, WORKERS_ENV)
    elif flag is not None:
        workers = flag
    else:
        workers = os.cpu_count() or 1

    if workers < 1:
        raise ConfigurationError(f"Worker count must be >= 1, got {workers}")
    return workers


def split_rows(n_rows: int, workers: int) -> List[slice]:
    """Split ``n_rows`` into at most ``workers`` contiguous, near-equal slices."""
    chunks = max(1, min(workers, n_rows))
    base, extra = divmod(n_rows, chunks)
    slices = []
    start = 0
    for chunk in range(chunks):
        stop = start + base + (1 if chunk < extra else 0)
        slices.append(slice(start, stop))
        start = stop
    return slices


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int) -> List[R]:
    """Apply ``fn`` to ``items`` on a thread pool, returning results in input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
