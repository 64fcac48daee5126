"""Brute-force reference implementations used as ground truth in tests.

Nothing here is shared with the production merge/tree code paths beyond the
orientation primitive; the point is an independent route to the same
answers. oracle_hull is the workhorse (sort + monotone scans); the O(n^3)
edge-membership construction cross-checks it on small inputs, and
oracle_bridge checks bridge finding by exhaustive pair testing.
"""

from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from .chain import Bridge, Chain, Side
from .errors import GeneralPositionError, SeparationError
from .geometry import Point, cross, require_finite_point


def _sorted_by_y(points) -> list:
    if isinstance(points, np.ndarray):
        pts = [(float(x), float(y)) for x, y in points.tolist()]
    else:
        pts = [tuple(require_finite_point(p)) for p in points]
    pts.sort(key=lambda p: p[1])
    for a, b in zip(pts, pts[1:]):
        if a[1] == b[1]:
            raise GeneralPositionError(f"duplicate y key: {a!r} vs {b!r}")
    return pts


def _scan(pts: list) -> list:
    # Keep strictly right-turning triples; an exact zero cross is a
    # collinear triple of input points, which general position forbids.
    out: list = []
    for p in pts:
        while len(out) >= 2:
            d = cross(out[-2], out[-1], p)
            if d == 0.0:
                raise GeneralPositionError(
                    f"collinear points: {out[-2]!r}, {out[-1]!r}, {p!r}"
                )
            if d > 0.0:
                out.pop()
            else:
                break
        out.append(p)
    return out


def oracle_hull(points) -> Tuple[Chain, Chain]:
    """Exact hull chains by sort plus two monotone scans.

    Accepts any point sequence or an (n, 2) array. Returns the (left, right)
    chain pair; both chains contain the topmost and bottommost points.
    """
    pts = _sorted_by_y(points)
    if not pts:
        return Chain.empty(Side.LEFT), Chain.empty(Side.RIGHT)
    left = _scan(pts)
    right = _scan(pts[::-1])
    lv = np.array(left, dtype=np.float64).reshape(len(left), 2)
    rv = np.array(right, dtype=np.float64).reshape(len(right), 2)
    lv.setflags(write=False)
    rv.setflags(write=False)
    return Chain(Side.LEFT, lv), Chain(Side.RIGHT, rv)


def oracle_hull_edges(points) -> Tuple[Chain, Chain]:
    """Exact hull chains by O(n^3) edge membership.

    A directed pair (a, b) is a clockwise hull edge iff every other point
    lies strictly right of it. Intended for small n as an independent
    cross-check of oracle_hull.
    """
    pts = _sorted_by_y(points)
    n = len(pts)
    if n == 0:
        return Chain.empty(Side.LEFT), Chain.empty(Side.RIGHT)
    if n == 1:
        v = np.array(pts, dtype=np.float64)
        v.setflags(write=False)
        return Chain(Side.LEFT, v), Chain(Side.RIGHT, v)
    succ: dict = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a, b = pts[i], pts[j]
            edge = True
            for k in range(n):
                if k == i or k == j:
                    continue
                d = cross(a, b, pts[k])
                if d == 0.0:
                    raise GeneralPositionError(
                        f"collinear points: {a!r}, {b!r}, {pts[k]!r}"
                    )
                if d > 0.0:
                    edge = False
                    break
            if edge:
                if a in succ:
                    raise AssertionError(f"two clockwise hull edges leave {a!r}")
                succ[a] = b
    vbot = pts[0]
    vtop = pts[-1]
    left = [vbot]
    cur = vbot
    while cur != vtop:
        cur = succ[cur]
        left.append(cur)
    right = [vtop]
    while cur != vbot:
        cur = succ[cur]
        right.append(cur)
    lv = np.array(left, dtype=np.float64)
    rv = np.array(right, dtype=np.float64)
    lv.setflags(write=False)
    rv.setflags(write=False)
    return Chain(Side.LEFT, lv), Chain(Side.RIGHT, rv)


def oracle_bridge(top_points: Sequence, bottom_points: Sequence, side: Side) -> Bridge:
    """Bridge between two vertically separated point sets by trying every
    (top, bottom) pair against every union point."""
    top = [require_finite_point(p) for p in top_points]
    bot = [require_finite_point(p) for p in bottom_points]
    if not top or not bot:
        raise SeparationError("empty point set")
    if min(p.y for p in top) <= max(p.y for p in bot):
        raise SeparationError("point sets not vertically separated")
    sign = 1.0 if side is Side.LEFT else -1.0
    found = None
    for t in top:
        for b in bot:
            ok = True
            for w in top:
                if w is not t and sign * cross(b, t, w) > 0.0:
                    ok = False
                    break
            if ok:
                for w in bot:
                    if w is not b and sign * cross(b, t, w) > 0.0:
                        ok = False
                        break
            if ok:
                if found is not None:
                    raise AssertionError(
                        f"bridge not unique: {found!r} and {(t, b)!r}"
                    )
                found = (t, b)
    if found is None:
        raise AssertionError("no bridge found")
    return Bridge(Point(*found[0]), Point(*found[1]))
