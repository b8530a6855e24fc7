"""Order-preserving parallel map over independent sweep points."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

THREADS_ENV = "CASIMIR_ARRAY_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit value, else the environment variable, else all cores."""
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError as exc:
                raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    return threads


@contextmanager
def ordered_map(threads: int | None = None):
    """Yield a ``map``-like callable whose results come back in input order.

    Every task is a pure function of its arguments, so the results do not
    depend on the number of workers.
    """
    n = resolve_threads(threads)
    if n == 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=n) as pool:
        def mapper(func, items):
            return pool.map(func, list(items), chunksize=1)
        yield mapper
