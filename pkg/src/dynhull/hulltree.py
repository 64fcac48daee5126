"""Concurrent dynamic planar convex hull.

The structure is an external BST over points keyed by y: leaves own the
points, internal nodes cache the hull chains of their descendant leaves and
a routing key (the minimum y of the top subtree). Updates rebuild chain
snapshots bottom-up along the leaf-to-root path; readers grab the root's
chain references without locks (strategy Coarse excepted).

Three locking strategies share one code path and differ only in the lock
map: Coarse wraps every operation in a tree-global lock, Fine uses one lock
per node hand-over-hand, Finer uses two locks per node so a merge holds at
most one chain of one node at a time. Writers only ever block on left locks
bottom-up (delete takes its same-level sibling lock non-blocking), which is
what makes the protocol deadlock-free.
"""

from __future__ import annotations

import threading
import time
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from . import _kernels
from .chain import Chain, Side
from .errors import EmptyTreeError, GeneralPositionError
from .geometry import Point, require_finite_point


class Strategy(Enum):
    COARSE = "coarse"
    FINE = "fine"
    FINER = "finer"


class ReadMode(Enum):
    RETRY_UNTIL_CONSISTENT = "retry"
    CONVEXIFY = "convexify"
    RAW = "raw"


_STRAT_CODE = {Strategy.COARSE: 0, Strategy.FINE: 1, Strategy.FINER: 2}


class Stats:
    """Operation counters. Updated without synchronization: exact in
    single-threaded use, close-enough under concurrency."""

    __slots__ = (
        "inserts",
        "deletes",
        "insert_retries",
        "delete_retries",
        "merges",
        "merge_levels",
        "last_merge_levels",
        "early_stops",
        "read_retries",
    )

    def __init__(self):
        for name in self.__slots__:
            setattr(self, name, 0)

    @property
    def retries(self) -> int:
        return self.insert_retries + self.delete_retries

    def snapshot(self) -> dict:
        d = {name: getattr(self, name) for name in self.__slots__}
        d["retries"] = self.retries
        return d


class HullTree:
    """Dynamic planar convex hull over points in general position
    (pairwise distinct y, no three collinear)."""

    def __init__(self, strategy=Strategy.FINER, kernels=None):
        if isinstance(strategy, str):
            strategy = Strategy(strategy)
        self.strategy = strategy
        self._code = _STRAT_CODE[strategy]
        self._k = kernels if kernels is not None else _kernels.impl
        self._root = None
        # Serializes the empty<->single-leaf transitions only.
        self._root_guard = threading.Lock()
        self._global = threading.Lock()
        self.stats = Stats()
        self._recorder = None  # debug hook: merge visits append here

    # ------------------------------------------------------------- public

    def insert(self, p) -> bool:
        """Add p. False if p is already present. Raises
        GeneralPositionError if another point already uses p's y key."""
        p = require_finite_point(p)
        if self._code == 0:
            with self._global:
                return self._insert(p)
        return self._insert(p)

    def delete(self, p) -> bool:
        """Remove p. False if p is not in the tree."""
        p = require_finite_point(p)
        if self._code == 0:
            with self._global:
                return self._delete(p)
        return self._delete(p)

    def get_hull(self, mode: ReadMode = ReadMode.RAW) -> Tuple[Chain, Chain]:
        """Current hull as a (left, right) chain pair.

        Raw returns the root's chain snapshots as-is; under concurrent
        writes the two sides may come from different moments. The retry mode
        rereads until the sides agree on their top and bottom vertices;
        Convexify instead repairs a torn pair into a valid hull of the
        union of both snapshots.
        """
        if self._code == 0:
            with self._global:
                return self._read_hull(mode)
        return self._read_hull(mode)

    def contains(self, p) -> bool:
        """Whether p lies inside or on the current raw hull."""
        p = require_finite_point(p)
        if self._code == 0:
            with self._global:
                return self._contains(p)
        return self._contains(p)

    def search(self, p):
        """The leaf whose key range covers p.y. Lock-free snapshot walk; the
        leaf may be stale by the time the caller looks at it."""
        p = require_finite_point(p)
        root = self._root
        if root is None:
            raise EmptyTreeError("search on empty tree")
        return self._k.find_leaf(root, p.y)

    def merge(self, node, assume_changed: bool = False) -> int:
        """Recompute chain snapshots from node toward the root. Without
        assume_changed the pass stops at the first node whose chains already
        equal the conquer of its children. Returns levels visited."""
        if self._code == 0:
            with self._global:
                return self._merge_from(node, assume_changed)
        return self._merge_from(node, assume_changed)

    # ------------------------------------------------------------ internals

    def _merge_from(self, node, first_dirty: bool = True) -> int:
        levels, early = self._k.merge_up(node, self._code, first_dirty, self._recorder)
        s = self.stats
        s.merges += 1
        s.merge_levels += levels
        s.last_merge_levels = levels
        if early:
            s.early_stops += 1
        return levels

    def _insert(self, p: Point) -> bool:
        K = self._k
        px, py = p
        stats = self.stats
        while True:
            root = self._root
            if root is None:
                with self._root_guard:
                    if self._root is None:
                        self._root = K.new_leaf(p)
                        stats.inserts += 1
                        return True
                stats.insert_retries += 1
                time.sleep(0)
                continue
            u = K.find_leaf(root, py)
            u.acquire_left()
            if u.is_deleted or u.route is not None:
                u.release_left()
                stats.insert_retries += 1
                time.sleep(0)
                continue
            q = u.point
            if q[1] == py:
                u.release_left()
                if q[0] == px:
                    return False
                raise GeneralPositionError(
                    f"point ({q[0]!r}, {q[1]!r}) already uses y key {py!r}"
                )
            # Split the leaf: u becomes internal with two fresh leaves.
            hi, lo = (p, q) if py > q[1] else (q, p)
            t = K.new_leaf(hi, u)
            b = K.new_leaf(lo, u)
            u.point = None
            u.left_verts = _pair(lo, hi)
            u.right_verts = _pair(hi, lo)
            u.route = (hi[1], t, b)
            u.release_left()
            stats.inserts += 1
            self._merge_from(u)
            return True

    def _delete(self, p: Point) -> bool:
        K = self._k
        px, py = p
        stats = self.stats
        while True:
            root = self._root
            if root is None:
                return False
            u = K.find_leaf(root, py)
            if u.parent is None:
                res = self._delete_root_leaf(u, px, py)
                if res is not None:
                    return res
                stats.delete_retries += 1
                time.sleep(0)
                continue
            u.acquire_left()
            if u.is_deleted or u.route is not None:
                u.release_left()
                stats.delete_retries += 1
                time.sleep(0)
                continue
            q = u.point
            if q[0] != px or q[1] != py:
                u.release_left()
                return False
            u_par = u.parent
            if u_par is None:
                u.release_left()
                stats.delete_retries += 1
                time.sleep(0)
                continue
            r = u_par.route
            u_sib = None
            if r is not None:
                if r[1] is u:
                    u_sib = r[2]
                elif r[2] is u:
                    u_sib = r[1]
            if u_sib is None:
                u.release_left()
                stats.delete_retries += 1
                time.sleep(0)
                continue
            # Same-level lock: non-blocking, or two deletes could deadlock.
            if not u_sib.acquire_left(False):
                u.release_left()
                stats.delete_retries += 1
                time.sleep(0)
                continue
            u_par.acquire_left()
            ok = (
                not u.is_deleted
                and not u_sib.is_deleted
                and not u_par.is_deleted
                and u.parent is u_par
            )
            if ok:
                rp = u_par.route
                ok = rp is not None and (
                    (rp[1] is u and rp[2] is u_sib)
                    or (rp[1] is u_sib and rp[2] is u)
                )
            if not ok:
                u_par.release_left()
                u_sib.release_left()
                u.release_left()
                stats.delete_retries += 1
                time.sleep(0)
                continue
            # u_par structurally becomes u_sib. Publication order matters
            # for lock-free readers: chains and point first, then adopted
            # children's parent pointers, then the routing tuple as one
            # swap, then the tombstones.
            sr = u_sib.route
            u_par.left_verts = u_sib.left_verts
            u_par.right_verts = u_sib.right_verts
            u_par.point = u_sib.point
            if sr is not None:
                sr[1].parent = u_par
                sr[2].parent = u_par
            u_par.route = sr
            u.is_deleted = True
            u_sib.is_deleted = True
            u_par.release_left()
            u_sib.release_left()
            u.release_left()
            stats.deletes += 1
            self._merge_from(u_par)
            return True

    def _delete_root_leaf(self, u, px, py) -> Optional[bool]:
        # Returns None to signal a retry.
        with self._root_guard:
            u.acquire_left()
            try:
                if self._root is not u or u.is_deleted or u.route is not None:
                    return None
                q = u.point
                if q[0] == px and q[1] == py:
                    u.is_deleted = True
                    self._root = None
                    self.stats.deletes += 1
                    return True
                return False
            finally:
                u.release_left()

    def _read_hull(self, mode: ReadMode) -> Tuple[Chain, Chain]:
        while True:
            root = self._root
            if root is None:
                return Chain.empty(Side.LEFT), Chain.empty(Side.RIGHT)
            lv = root.left_verts
            rv = root.right_verts
            if mode is ReadMode.RAW or _endpoints_match(lv, rv):
                return Chain(Side.LEFT, lv), Chain(Side.RIGHT, rv)
            if mode is ReadMode.CONVEXIFY:
                lv, rv = _convexify_union(lv, rv)
                return Chain(Side.LEFT, lv), Chain(Side.RIGHT, rv)
            self.stats.read_retries += 1

    def _contains(self, p: Point) -> bool:
        root = self._root
        if root is None:
            return False
        return bool(
            self._k.contains_hull(root.left_verts, root.right_verts, p.x, p.y)
        )

    # ----------------------------------------------------- quiescent helpers

    def points(self) -> list:
        """All live points, bottom-up by key. Quiescent use only."""
        out = []
        root = self._root
        if root is None:
            return out
        stack = [root]
        while stack:
            node = stack.pop()
            r = node.route
            if r is None:
                out.append(Point(node.point[0], node.point[1]))
            else:
                stack.append(r[1])
                stack.append(r[2])
        out.sort(key=lambda q: q.y)
        return out

    def height(self) -> int:
        root = self._root
        if root is None:
            return 0
        best = 0
        stack = [(root, 1)]
        while stack:
            node, d = stack.pop()
            r = node.route
            if r is None:
                if d > best:
                    best = d
            else:
                stack.append((r[1], d + 1))
                stack.append((r[2], d + 1))
        return best

    def audit(self) -> None:
        """Full structural check: separator invariants, parent pointers,
        cached chains equal to the conquer of the children's chains, no
        tombstoned nodes reachable. Quiescent use only; raises
        AssertionError on the first violation."""
        root = self._root
        if root is None:
            return
        if root.parent is not None:
            raise AssertionError("root has a parent")
        K = self._k
        LEFT, RIGHT = K.LEFT, K.RIGHT

        def walk(node):
            if node.is_deleted:
                raise AssertionError("reachable node is tombstoned")
            r = node.route
            if r is None:
                x, y = node.point
                for verts in (node.left_verts, node.right_verts):
                    if verts.shape != (1, 2) or verts[0, 0] != x or verts[0, 1] != y:
                        raise AssertionError("leaf chains disagree with its point")
                return y, y
            key, t, b = r
            if t.parent is not node or b.parent is not node:
                raise AssertionError("child parent pointer is stale")
            t_min, t_max = walk(t)
            b_min, b_max = walk(b)
            if not (b_max < key <= t_min):
                raise AssertionError(
                    f"routing key {key!r} does not separate "
                    f"[{b_min!r}, {b_max!r}] from [{t_min!r}, {t_max!r}]"
                )
            want_l = K.merge_side(t.left_verts, b.left_verts, LEFT)
            want_r = K.merge_side(t.right_verts, b.right_verts, RIGHT)
            if not K.chains_equal(want_l, node.left_verts):
                raise AssertionError("left chain is not the conquer of children")
            if not K.chains_equal(want_r, node.right_verts):
                raise AssertionError("right chain is not the conquer of children")
            return b_min, t_max

        walk(root)


def _pair(lo, hi):
    arr = np.array([[lo[0], lo[1]], [hi[0], hi[1]]], dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _endpoints_match(lv, rv) -> bool:
    if lv.shape[0] == 0 or rv.shape[0] == 0:
        return lv.shape[0] == rv.shape[0]
    return (
        lv[-1, 0] == rv[0, 0]
        and lv[-1, 1] == rv[0, 1]
        and lv[0, 0] == rv[-1, 0]
        and lv[0, 1] == rv[-1, 1]
    )


def _convexify_union(lv, rv):
    """Rebuild a consistent hull from the union of two (possibly torn)
    chain snapshots. O(h) monotone scans over the merged vertex lists."""
    pts = sorted(
        set(map(tuple, lv.tolist())) | set(map(tuple, rv.tolist())),
        key=lambda p: (p[1], p[0]),
    )
    left: list = []
    for p in pts:
        while len(left) >= 2 and _turn(left[-2], left[-1], p) >= 0.0:
            left.pop()
        left.append(p)
    right: list = []
    for p in reversed(pts):
        while len(right) >= 2 and _turn(right[-2], right[-1], p) >= 0.0:
            right.pop()
        right.append(p)
    la = np.array(left, dtype=np.float64).reshape(len(left), 2)
    ra = np.array(right, dtype=np.float64).reshape(len(right), 2)
    la.setflags(write=False)
    ra.setflags(write=False)
    return la, ra


def _turn(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
