"""Shared fixtures and generators for the test suite."""

import numpy as np
import pytest

import dynhull._kernels as kernels_pkg
from dynhull.oracle import oracle_hull


def _backend_names():
    names = ["pure"]
    try:
        kernels_pkg.backend("compiled")
    except Exception:
        return names
    names.append("compiled")
    return names


BACKEND_NAMES = _backend_names()


@pytest.fixture(params=BACKEND_NAMES)
def kernels(request):
    """One parametrized kernel backend per run: pure, plus compiled when built."""
    return kernels_pkg.backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


def draw_unique_y(rng, n, x_lo=0.0, x_hi=10.0, y_lo=0.0, y_hi=10.0):
    """n random points with pairwise-distinct y coordinates."""
    xs = rng.uniform(x_lo, x_hi, n)
    ys = rng.uniform(y_lo, y_hi, n)
    while True:
        _, idx = np.unique(ys, return_index=True)
        if idx.size == n:
            break
        dup = np.setdiff1d(np.arange(n), idx)
        ys[dup] = rng.uniform(y_lo, y_hi, dup.size)
    return np.column_stack([xs, ys])


def separated_point_sets(rng, n_top, n_bot, gap=0.5):
    """Two point sets with every top y strictly above every bottom y."""
    mid = 5.0
    top = draw_unique_y(rng, n_top, y_lo=mid + gap, y_hi=10.0)
    bot = draw_unique_y(rng, n_bot, y_lo=0.0, y_hi=mid - gap)
    return top, bot


def separated_hull_pair(rng, n_top, n_bot, gap=0.5):
    """Hull chains of two y-separated random point sets."""
    top, bot = separated_point_sets(rng, n_top, n_bot, gap)
    return oracle_hull(top), oracle_hull(bot), top, bot
