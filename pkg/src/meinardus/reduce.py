"""Deterministic reductions and an order-preserving thread map.

Work is always split into the same chunks regardless of the thread count,
and partial results are combined with a fixed pairwise tree, so results are
bit-identical for any ``threads`` value.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

__all__ = ["pairwise_sum", "parallel_map", "chunk_ranges"]


def pairwise_sum(values: Sequence):
    """Sum by a balanced binary tree; the tree depends only on len(values)."""
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def array_pairwise_sum(a: np.ndarray):
    """Pairwise sum over the last axis with a fixed, length-determined tree."""
    a = np.asarray(a)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1], dtype=a.dtype)
    while a.shape[-1] > 1:
        n = a.shape[-1]
        even = a[..., : n - n % 2]
        head = even[..., 0::2] + even[..., 1::2]
        a = np.concatenate([head, a[..., n - 1 :]], axis=-1) if n % 2 else head
    return a[..., 0]


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def chunk_ranges(n: int, chunk: int) -> list[tuple[int, int]]:
    """Half-open ranges covering [0, n) in steps of ``chunk``."""
    return [(i, min(n, i + chunk)) for i in range(0, n, chunk)]
