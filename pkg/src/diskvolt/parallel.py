"""Order-preserving parallel map capped by ``DISKVOLT_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_THREADS = "DISKVOLT_THREADS"


def thread_count(requested: int | None = None) -> int:
    n = requested
    if n is None:
        env = os.environ.get(ENV_THREADS)
        n = int(env) if env else 1
    cap = os.environ.get(ENV_THREADS)
    if cap and requested is not None:
        n = min(n, int(cap))
    return max(1, n)


def pmap(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Apply ``fn`` to each item; results come back in input order."""
    items = list(items)
    n = thread_count(threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
