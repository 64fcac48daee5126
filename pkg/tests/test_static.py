"""Batch divide-and-conquer hull: sequential/parallel equivalence and edges."""

import numpy as np
import pytest

from dynhull.errors import GeneralPositionError, InputError
from dynhull.geometry import Point
from dynhull.oracle import oracle_hull
from dynhull.static_hull import (
    StaticHullConfig,
    static_hull_parallel,
    static_hull_sequential,
)
from dynhull.workload import Distribution, sample

from conftest import draw_unique_y
from test_chain import BOTTOM_CHAIN_PTS, TOP_CHAIN_PTS


def test_config_validation():
    StaticHullConfig(cutoff=2, parallelism=1)
    with pytest.raises(ValueError):
        StaticHullConfig(cutoff=1)
    with pytest.raises(ValueError):
        StaticHullConfig(parallelism=0)


def test_empty_input():
    left, right = static_hull_sequential([])
    assert len(left) == 0 and len(right) == 0
    left, right = static_hull_parallel([])
    assert len(left) == 0 and len(right) == 0


def test_tiny_inputs():
    left, right = static_hull_sequential([(1.0, 2.0)])
    assert left.points() == right.points() == [Point(1.0, 2.0)]
    left, right = static_hull_sequential([(3.0, 4.0), (0.0, 1.0)])
    assert left.points() == [Point(0.0, 1.0), Point(3.0, 4.0)]
    assert right.points() == [Point(3.0, 4.0), Point(0.0, 1.0)]


def test_triangle_keeps_all_vertices():
    pts = [(0.0, 0.0), (4.0, 1.0), (1.0, 3.0)]
    assert static_hull_sequential(pts) == oracle_hull(pts)


def test_matches_oracle_on_uniform_square(rng):
    pts = draw_unique_y(rng, 1000)
    assert static_hull_sequential(pts) == oracle_hull(pts)


def test_two_chain_fixture_points():
    pts = TOP_CHAIN_PTS + BOTTOM_CHAIN_PTS
    got = static_hull_sequential(pts)
    assert got == oracle_hull(pts)
    # The joined west side runs through the two bridge endpoints.
    assert Point(1.0, 6.0) in got[0].points()
    assert Point(1.5, 1.5) in got[0].points()


@pytest.mark.parametrize("n", [3, 64, 1999, 2000, 2001, 9973])
def test_parallel_equals_sequential(n, rng, kernels):
    pts = draw_unique_y(rng, n)
    seq = static_hull_sequential(pts, kernels=kernels)
    par = static_hull_parallel(
        pts, StaticHullConfig(cutoff=500, parallelism=4), kernels=kernels
    )
    assert np.array_equal(seq[0].verts, par[0].verts)
    assert np.array_equal(seq[1].verts, par[1].verts)


def test_parallel_default_config(rng):
    pts = draw_unique_y(rng, 3000)
    assert static_hull_parallel(pts) == static_hull_sequential(pts)


def test_deterministic_across_runs(rng):
    pts = sample(Distribution.circle(5), 20000)
    cfg = StaticHullConfig(cutoff=1000, parallelism=8)
    a = static_hull_parallel(pts, cfg)
    b = static_hull_parallel(pts, cfg)
    assert np.array_equal(a[0].verts, b[0].verts)
    assert np.array_equal(a[1].verts, b[1].verts)
    assert a == oracle_hull(pts)


@pytest.mark.parametrize("kind", ["square", "circle", "annulus"])
def test_matches_oracle_per_distribution(kind):
    dist = getattr(Distribution, kind)(77)
    pts = sample(dist, 30000)
    seq = static_hull_sequential(pts)
    par = static_hull_parallel(pts, StaticHullConfig(cutoff=2000, parallelism=8))
    want = oracle_hull(pts)
    assert seq == want
    assert par == want


def test_rejects_duplicate_y():
    with pytest.raises(GeneralPositionError):
        static_hull_sequential([(0.0, 1.0), (5.0, 1.0), (2.0, 3.0)])


def test_rejects_nonfinite():
    with pytest.raises(InputError):
        static_hull_sequential([(0.0, 1.0), (float("nan"), 2.0)])


def test_accepts_lists_and_arrays(rng):
    pts = draw_unique_y(rng, 50)
    as_list = [tuple(p) for p in pts.tolist()]
    assert static_hull_sequential(pts) == static_hull_sequential(as_list)


def test_output_chains_are_frozen(rng):
    left, right = static_hull_sequential(draw_unique_y(rng, 100))
    assert not left.verts.flags.writeable
    assert not right.verts.flags.writeable
    left.validate()
    right.validate()
