"""Ordered chunk-parallel map; results are merged in submission order so the
outcome never depends on the worker count."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_THREADS = "GOWERS_LAB_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_THREADS)
    cap = os.cpu_count() or 1
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
    return cap


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
