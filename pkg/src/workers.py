#!/usr/bin/env python3
"""
Process-pool fan-out with an ordered merge.

Each task function is a top-level callable taking one item; read-only data the
tasks share is installed once per worker through the pool initializer and read
back with shared(). Results always come back in input order, so every merge
is identical for any worker count.
"""

import logging
import multiprocessing
from typing import Any, Callable, Iterable, List, Optional

logger = logging.getLogger(__name__)

_SHARED: Any = None


def _install(payload: Any) -> None:
    global _SHARED
    _SHARED = payload


def shared() -> Any:
    """Payload installed for the current task batch."""
    return _SHARED


def ordered_map(func: Callable[[Any], Any], items: Iterable[Any], workers: int = 1,
                payload: Optional[Any] = None) -> List[Any]:
    """Apply func to every item, in a worker pool when workers > 1, preserving order."""
    items = list(items)
    if workers < 1:
        raise ValueError(f"Worker count must be positive, got {workers}")
    if workers == 1 or len(items) <= 1:
        previous = _SHARED
        _install(payload)
        try:
            return [func(item) for item in items]
        finally:
            _install(previous)
    logger.info(f"Dispatching {len(items)} tasks to {workers} workers")
    with multiprocessing.Pool(processes=workers, initializer=_install, initargs=(payload,)) as pool:
        return list(pool.imap(func, items))
