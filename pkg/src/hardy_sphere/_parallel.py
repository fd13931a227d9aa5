"""Bounded data-parallel map with deterministic ordered results."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_ENV_VAR = "HARDY_SPHERE_THREADS"


def thread_cap() -> int:
    """Parallelism ceiling from the environment; 0 or unset means auto."""
    raw = os.environ.get(_ENV_VAR, "0")
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError(f"{_ENV_VAR} must be >= 0, got {cap}")
    if cap == 0:
        return min(4, os.cpu_count() or 1)
    return cap


def parallel_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Apply fn to every item, results in input order; exceptions propagate."""
    items = list(items)
    cap = min(thread_cap(), len(items)) or 1
    if cap == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))
