"""Hull chains and the divide-and-conquer bridge operations.

A hull is stored as two chains meeting at the topmost and bottommost
vertices. The left chain covers the west side and is stored in increasing y;
the right chain covers the east side and is stored in decreasing y. Both
storage orders are clockwise walks of the hull, so consecutive stored
triples on either side turn strictly right. Chains are immutable value
objects wrapping read-only (n, 2) float64 arrays; every operation returns
fresh chains.
"""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple, Tuple

import numpy as np

from . import _kernels
from .errors import ChainError, SeparationError
from .geometry import Point, cross, require_finite_point


class Side(Enum):
    LEFT = 0
    RIGHT = 1


class Bridge(NamedTuple):
    """Endpoints of the hull edge joining a top and a bottom chain."""

    top_point: Point
    bottom_point: Point


def _as_verts(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ChainError(f"expected (n, 2) vertex data, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ChainError("non-finite vertex coordinates")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


class Chain:
    """One side of a hull. Wraps the vertex array without copying."""

    __slots__ = ("side", "verts")

    def __init__(self, side: Side, verts: np.ndarray):
        self.side = side
        self.verts = verts

    @classmethod
    def from_points(cls, side: Side, points, validate: bool = True) -> "Chain":
        chain = cls(side, _as_verts(points))
        if validate:
            chain.validate()
        return chain

    @classmethod
    def empty(cls, side: Side) -> "Chain":
        return cls(side, _EMPTY_VERTS)

    def __len__(self) -> int:
        return self.verts.shape[0]

    def __iter__(self):
        for x, y in self.verts:
            yield Point(float(x), float(y))

    def points(self) -> list:
        return list(self)

    @property
    def top(self) -> Point:
        i = -1 if self.side is Side.LEFT else 0
        return Point(float(self.verts[i, 0]), float(self.verts[i, 1]))

    @property
    def bottom(self) -> Point:
        i = 0 if self.side is Side.LEFT else -1
        return Point(float(self.verts[i, 0]), float(self.verts[i, 1]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.side is other.side and np.array_equal(self.verts, other.verts)

    __hash__ = None

    def __repr__(self) -> str:
        pts = ", ".join(f"({x:g}, {y:g})" for x, y in self.verts)
        return f"Chain({self.side.name}, [{pts}])"

    def index_of(self, v) -> int:
        """Stored index of vertex v, located by binary search on y."""
        v = require_finite_point(v)
        ys = self.verts[:, 1]
        n = ys.shape[0]
        if self.side is Side.LEFT:
            i = int(np.searchsorted(ys, v.y))
        else:
            i = n - int(np.searchsorted(ys[::-1], v.y, side="right"))
        if 0 <= i < n and self.verts[i, 0] == v.x and self.verts[i, 1] == v.y:
            return i
        raise ChainError(f"vertex {tuple(v)} not on {self.side.name} chain")

    def validate(self) -> "Chain":
        """Assert the chain invariant: strictly y-monotone in storage order
        and strictly right-turning at every interior vertex."""
        arr = self.verts
        ys = arr[:, 1]
        dy = np.diff(ys)
        ok = np.all(dy > 0) if self.side is Side.LEFT else np.all(dy < 0)
        if not ok:
            raise ChainError(f"{self.side.name} chain not strictly y-monotone")
        for i in range(arr.shape[0] - 2):
            if cross(arr[i], arr[i + 1], arr[i + 2]) >= 0.0:
                raise ChainError(
                    f"{self.side.name} chain not strictly convex at index {i + 1}"
                )
        return self


_EMPTY_VERTS = _as_verts(np.empty((0, 2), dtype=np.float64))


def _order_by_y(v, other):
    if v[1] == other[1]:
        raise ChainError("tangency undefined for points sharing a y coordinate")
    return (v, other) if v[1] < other[1] else (other, v)


def is_tangent_at(chain: Chain, v, other) -> bool:
    """Whether the line through v and other touches the chain at v without
    any chain vertex on its outer side (left of the upward line for left
    chains, right of it for right chains). By convexity only v's stored
    neighbours need testing. v must be a chain vertex; other must not be.
    """
    i = chain.index_of(v)
    lo, hi = _order_by_y(require_finite_point(v), require_finite_point(other))
    sign = 1.0 if chain.side is Side.LEFT else -1.0
    arr = chain.verts
    for j in (i - 1, i + 1):
        if 0 <= j < arr.shape[0]:
            if sign * cross(lo, hi, arr[j]) > 0.0:
                return False
    return True


def find_bridge(top: Chain, bottom: Chain) -> Bridge:
    """Bridge between two same-side chains, bottom strictly below top."""
    if top.side is not bottom.side:
        raise ChainError("bridge requires same-side chains")
    ti, bi, _ = _kernels.impl.find_bridge(top.verts, bottom.verts, top.side.value)
    return Bridge(
        Point(float(top.verts[ti, 0]), float(top.verts[ti, 1])),
        Point(float(bottom.verts[bi, 0]), float(bottom.verts[bi, 1])),
    )


def split_at(chain: Chain, v) -> Tuple[Chain, Chain]:
    """Split into (upper, lower) at vertex v; v is included in both parts."""
    i = chain.index_of(v)
    arr = chain.verts
    if chain.side is Side.LEFT:
        upper, lower = arr[i:], arr[: i + 1]
    else:
        upper, lower = arr[: i + 1], arr[i:]
    return Chain(chain.side, upper), Chain(chain.side, lower)


def concat(upper: Chain, lower: Chain) -> Chain:
    """Join two vertically disjoint same-side chains into one."""
    if upper.side is not lower.side:
        raise ChainError("concat requires same-side chains")
    if len(upper) == 0:
        return lower
    if len(lower) == 0:
        return upper
    if not upper.bottom.y > lower.top.y:
        raise SeparationError(
            f"upper chain min y {upper.bottom.y!r} not above "
            f"lower chain max y {lower.top.y!r}"
        )
    if upper.side is Side.LEFT:
        out = np.concatenate((lower.verts, upper.verts))
    else:
        out = np.concatenate((upper.verts, lower.verts))
    out.setflags(write=False)
    return Chain(upper.side, out)


def conquer(top_chains, bottom_chains) -> Tuple[Chain, Chain]:
    """Merge the hulls of a top and a bottom point set, given as (left,
    right) chain pairs, into the (left, right) pair of the union hull."""
    tl, tr = top_chains
    bl, br = bottom_chains
    if tl.side is not Side.LEFT or bl.side is not Side.LEFT:
        raise ChainError("first chain of each pair must be the left chain")
    if tr.side is not Side.RIGHT or br.side is not Side.RIGHT:
        raise ChainError("second chain of each pair must be the right chain")
    impl = _kernels.impl
    left = impl.merge_side(tl.verts, bl.verts, Side.LEFT.value)
    right = impl.merge_side(tr.verts, br.verts, Side.RIGHT.value)
    return Chain(Side.LEFT, left), Chain(Side.RIGHT, right)
