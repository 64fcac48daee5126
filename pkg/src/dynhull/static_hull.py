"""Static divide-and-conquer hull over a batch of points.

Points are sorted by y once, split recursively into halves, and the halves'
chains are spliced with the same per-side bridge kernels the dynamic tree
uses. The parallel variant forks the top half onto a thread pool below a
size cutoff and keeps the identical recursion tree, so its output is
bit-for-bit the sequential output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernels
from .chain import Chain, Side
from .errors import GeneralPositionError, InputError


@dataclass(frozen=True)
class StaticHullConfig:
    """cutoff: subproblem size at and below which recursion stays inline.
    parallelism: worker count, None for the host CPU count."""

    cutoff: int = 2000
    parallelism: Optional[int] = None

    def __post_init__(self):
        if self.cutoff < 2:
            raise InputError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.parallelism is not None and self.parallelism < 1:
            raise InputError(f"parallelism must be >= 1, got {self.parallelism}")


def _prepare(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"expected (n, 2) point data, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("non-finite point coordinates")
    arr = np.ascontiguousarray(arr[np.argsort(arr[:, 1], kind="stable")])
    ys = arr[:, 1]
    dup = np.nonzero(ys[1:] == ys[:-1])[0]
    if dup.size:
        i = int(dup[0])
        raise GeneralPositionError(
            f"duplicate y key: {tuple(arr[i])!r} vs {tuple(arr[i + 1])!r}"
        )
    return arr


def _base(arr, lo, hi):
    if hi - lo == 1:
        v = np.ascontiguousarray(arr[lo:hi])
        v.setflags(write=False)
        return v, v
    left = np.ascontiguousarray(arr[lo:hi])
    right = np.ascontiguousarray(arr[lo:hi][::-1])
    left.setflags(write=False)
    right.setflags(write=False)
    return left, right


def _recurse(arr, lo, hi, impl):
    if hi - lo <= 2:
        return _base(arr, lo, hi)
    mid = (lo + hi) // 2
    bl, br = _recurse(arr, lo, mid, impl)
    tl, tr = _recurse(arr, mid, hi, impl)
    return (
        impl.merge_side(tl, bl, impl.LEFT),
        impl.merge_side(tr, br, impl.RIGHT),
    )


def _recurse_parallel(arr, lo, hi, cutoff, pool, impl):
    if hi - lo <= cutoff:
        return _recurse(arr, lo, hi, impl)
    mid = (lo + hi) // 2
    fut = pool.submit(_recurse_parallel, arr, mid, hi, cutoff, pool, impl)
    bl, br = _recurse_parallel(arr, lo, mid, cutoff, pool, impl)
    # If no worker picked the fork up yet, run it inline instead of blocking
    # a pool thread on it; that keeps bounded pools deadlock-free.
    if fut.cancel():
        tl, tr = _recurse_parallel(arr, mid, hi, cutoff, pool, impl)
    else:
        tl, tr = fut.result()
    return (
        impl.merge_side(tl, bl, impl.LEFT),
        impl.merge_side(tr, br, impl.RIGHT),
    )


def _wrap(pair) -> Tuple[Chain, Chain]:
    return Chain(Side.LEFT, pair[0]), Chain(Side.RIGHT, pair[1])


def static_hull_sequential(points, kernels=None) -> Tuple[Chain, Chain]:
    """Hull chains of a point batch, single-threaded."""
    impl = kernels if kernels is not None else _kernels.impl
    arr = _prepare(points)
    if arr.shape[0] == 0:
        return Chain.empty(Side.LEFT), Chain.empty(Side.RIGHT)
    return _wrap(_recurse(arr, 0, arr.shape[0], impl))


def static_hull_parallel(
    points, config: Optional[StaticHullConfig] = None, kernels=None
) -> Tuple[Chain, Chain]:
    """Hull chains of a point batch using a bounded thread pool. Output is
    identical to static_hull_sequential for the same input."""
    impl = kernels if kernels is not None else _kernels.impl
    cfg = config if config is not None else StaticHullConfig()
    arr = _prepare(points)
    n = arr.shape[0]
    if n == 0:
        return Chain.empty(Side.LEFT), Chain.empty(Side.RIGHT)
    workers = cfg.parallelism or os.cpu_count() or 1
    if n <= cfg.cutoff or workers == 1:
        return _wrap(_recurse(arr, 0, n, impl))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        pair = _recurse_parallel(arr, 0, n, cfg.cutoff, pool, impl)
    return _wrap(pair)
