"""Cross-checks between the two independent hull oracles."""

import numpy as np
import pytest

from dynhull.chain import Bridge, Side
from dynhull.errors import GeneralPositionError, SeparationError
from dynhull.geometry import Point
from dynhull.oracle import oracle_bridge, oracle_hull, oracle_hull_edges

from conftest import draw_unique_y, separated_point_sets


def test_oracle_hull_triangle():
    left, right = oracle_hull([(0.0, 0.0), (4.0, 1.0), (1.0, 3.0)])
    assert left.points() == [Point(0.0, 0.0), Point(1.0, 3.0)]
    assert right.points() == [Point(1.0, 3.0), Point(4.0, 1.0), Point(0.0, 0.0)]


def test_oracle_hull_drops_interior_point():
    pts = [(0.0, 0.0), (4.0, 1.0), (1.0, 3.0), (1.5, 1.2)]
    left, right = oracle_hull(pts)
    flat = left.points() + right.points()
    assert Point(1.5, 1.2) not in flat


def test_oracle_hull_singleton_and_pair():
    left, right = oracle_hull([(2.0, 5.0)])
    assert left.points() == right.points() == [Point(2.0, 5.0)]
    left, right = oracle_hull([(0.0, 0.0), (1.0, 4.0)])
    assert left.points() == [Point(0.0, 0.0), Point(1.0, 4.0)]
    assert right.points() == [Point(1.0, 4.0), Point(0.0, 0.0)]


def test_oracle_hull_shared_extremes():
    # Top and bottom vertices appear on both chains.
    pts = draw_unique_y(np.random.default_rng(7), 50)
    left, right = oracle_hull(pts)
    assert left.top == right.top
    assert left.bottom == right.bottom


def test_oracle_hull_rejects_duplicate_y():
    with pytest.raises(GeneralPositionError):
        oracle_hull([(0.0, 1.0), (2.0, 1.0), (1.0, 3.0)])


def test_oracle_hull_rejects_collinear():
    with pytest.raises(GeneralPositionError):
        oracle_hull([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])


def test_oracle_hull_edges_rejects_collinear():
    with pytest.raises(GeneralPositionError):
        oracle_hull_edges([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])


def test_two_oracles_agree(rng):
    # The scan oracle and the edge-membership oracle are independent
    # constructions; they must produce identical chains.
    for _ in range(60):
        pts = draw_unique_y(rng, int(rng.integers(1, 48)))
        a = oracle_hull(pts)
        b = oracle_hull_edges(pts)
        assert a == b


def test_oracle_bridge_pinned_pair():
    top = [(0.0, 10.0), (1.0, 12.0)]
    bot = [(0.0, 0.0), (1.0, 2.0)]
    br = oracle_bridge(top, bot, Side.LEFT)
    assert br == Bridge(Point(0.0, 10.0), Point(0.0, 0.0))


def test_oracle_bridge_requires_separation():
    with pytest.raises(SeparationError):
        oracle_bridge([(0.0, 1.0)], [(0.0, 5.0)], Side.LEFT)


def test_oracle_bridge_endpoints_on_union_hull(rng):
    for _ in range(30):
        top, bot = separated_point_sets(
            rng, int(rng.integers(1, 16)), int(rng.integers(1, 16))
        )
        tl, tr = oracle_hull(top)
        bl, br = oracle_hull(bot)
        union_l, union_r = oracle_hull(np.vstack([top, bot]))
        bridge_l = oracle_bridge(tl.points(), bl.points(), Side.LEFT)
        bridge_r = oracle_bridge(tr.points(), br.points(), Side.RIGHT)
        assert bridge_l.top_point in union_l.points()
        assert bridge_l.bottom_point in union_l.points()
        assert bridge_r.top_point in union_r.points()
        assert bridge_r.bottom_point in union_r.points()
