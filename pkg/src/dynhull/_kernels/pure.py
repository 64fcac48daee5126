"""Pure-Python kernel backend.

Mirrors dynhull._kernels._speedups and is selected at import time when the
compiled extension is unavailable (or DYNHULL_KERNELS=pure). Chain payloads
are read-only (n, 2) float64 arrays in the owning side's storage order: left
chains ascend in y, right chains descend. Both orders are clockwise walks,
so the two sides share one bridge walk driven by a direction flag.
"""

import threading

import numpy as np

from ..errors import SeparationError

TAG = "pure"
LEFT = 0
RIGHT = 1

COARSE = 0
FINE = 1
FINER = 2


class Node:
    """External-BST node.

    `route` is None for a leaf, else an immutable (routing_key, top_child,
    bot_child) triple. The triple is swapped whole so lock-free searches
    never observe a torn routing state while a delete restructures the node.
    Chain snapshots are likewise replaced by reference, never mutated.
    """

    __slots__ = (
        "point",
        "route",
        "left_verts",
        "right_verts",
        "parent",
        "is_deleted",
        "seq",
        "_llock",
        "_rlock",
    )

    def __init__(self, point, left_verts, right_verts, parent=None):
        self.point = point
        self.route = None
        self.left_verts = left_verts
        self.right_verts = right_verts
        self.parent = parent
        self.is_deleted = False
        self.seq = 0
        self._llock = threading.Lock()
        self._rlock = threading.Lock()

    @property
    def routing_key(self):
        r = self.route
        return None if r is None else r[0]

    def acquire_left(self, blocking=True):
        return self._llock.acquire(blocking)

    def release_left(self):
        self._llock.release()

    def acquire_right(self, blocking=True):
        return self._rlock.acquire(blocking)

    def release_right(self):
        self._rlock.release()


def new_leaf(point, parent=None):
    v = np.array([[point[0], point[1]]], dtype=np.float64)
    v.setflags(write=False)
    return Node((float(point[0]), float(point[1])), v, v, parent)


def find_leaf(node, y):
    """Descend routing tuples until a leaf. Lock-free; the caller validates
    the leaf under its lock before acting on it."""
    while True:
        r = node.route
        if r is None:
            return node
        node = r[1] if y >= r[0] else r[2]


def _cross(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def find_bridge(top, bot, side):
    """Tangency walk over two vertically separated same-side chains.

    Returns (top_index, bot_index, advances) in stored order: the bridge
    endpoints are top[top_index] and bot[bot_index]. advances counts index
    moves and is bounded by len(top) + len(bot).
    """
    n = top.shape[0]
    m = bot.shape[0]
    if n == 0 or m == 0:
        raise SeparationError("empty chain")
    rev = side == RIGHT
    sign = -1.0 if rev else 1.0

    top_min_y = top[n - 1, 1] if rev else top[0, 1]
    bot_max_y = bot[0, 1] if rev else bot[m - 1, 1]
    if not top_min_y > bot_max_y:
        raise SeparationError(
            f"top chain min y {top_min_y!r} not above bottom chain max y {bot_max_y!r}"
        )

    # Walk in a y-increasing view of both chains; rev maps view to storage.
    p = 0
    q = m - 1
    advances = 0
    limit = n + m

    def viol(arr, alen, vi, lox, loy, hix, hiy):
        si = alen - 1 - vi if rev else vi
        return sign * _cross(lox, loy, hix, hiy, arr[si, 0], arr[si, 1]) > 0.0

    while True:
        moved = False
        while True:
            si = n - 1 - p if rev else p
            hix = top[si, 0]
            hiy = top[si, 1]
            si = m - 1 - q if rev else q
            lox = bot[si, 0]
            loy = bot[si, 1]
            bad = (p + 1 < n and viol(top, n, p + 1, lox, loy, hix, hiy)) or (
                p > 0 and viol(top, n, p - 1, lox, loy, hix, hiy)
            )
            if not bad:
                break
            if p + 1 >= n:
                raise AssertionError("bridge walk stuck on top chain")
            p += 1
            advances += 1
            moved = True
            if advances > limit:
                raise AssertionError("bridge walk exceeded advance bound")
        while True:
            si = n - 1 - p if rev else p
            hix = top[si, 0]
            hiy = top[si, 1]
            si = m - 1 - q if rev else q
            lox = bot[si, 0]
            loy = bot[si, 1]
            bad = (q > 0 and viol(bot, m, q - 1, lox, loy, hix, hiy)) or (
                q + 1 < m and viol(bot, m, q + 1, lox, loy, hix, hiy)
            )
            if not bad:
                break
            if q == 0:
                raise AssertionError("bridge walk stuck on bottom chain")
            q -= 1
            advances += 1
            moved = True
            if advances > limit:
                raise AssertionError("bridge walk exceeded advance bound")
        if not moved:
            break
    ti = n - 1 - p if rev else p
    bi = m - 1 - q if rev else q
    return ti, bi, advances


def merge_side(top, bot, side):
    """Conquer one side: splice the two chains at their bridge. Returns a
    fresh read-only array; inputs are never mutated."""
    ti, bi, _ = find_bridge(top, bot, side)
    if side == LEFT:
        out = np.concatenate((bot[: bi + 1], top[ti:]))
    else:
        out = np.concatenate((top[: ti + 1], bot[bi:]))
    out.setflags(write=False)
    return out


def chains_equal(a, b):
    return a is b or np.array_equal(a, b)


def contains_hull(left, right, x, y):
    """Point-in-hull test against raw chain snapshots. Boundary counts as
    inside. Binary search per chain; only the edge spanning y can exclude."""
    n = left.shape[0]
    if n == 0:
        return False
    if y < left[0, 1] or y > left[n - 1, 1]:
        return False
    if n == 1:
        return x == left[0, 0] and y == left[0, 1]
    i = int(np.searchsorted(left[:, 1], y, side="right")) - 1
    if i < 0:
        i = 0
    elif i > n - 2:
        i = n - 2
    if _cross(left[i, 0], left[i, 1], left[i + 1, 0], left[i + 1, 1], x, y) > 0.0:
        return False
    m = right.shape[0]
    if m == 0:
        return False
    if y > right[0, 1] or y < right[m - 1, 1]:
        return False
    if m == 1:
        return x == right[0, 0] and y == right[0, 1]
    lo = 0
    hi = m - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if right[mid, 1] >= y:
            lo = mid
        else:
            hi = mid
    if _cross(right[lo, 0], right[lo, 1], right[lo + 1, 0], right[lo + 1, 1], x, y) > 0.0:
        return False
    return True


def _update(node, side, recorder):
    r = node.route
    if r is None:
        return False
    t = r[1]
    b = r[2]
    if side == LEFT:
        new = merge_side(t.left_verts, b.left_verts, LEFT)
        changed = not chains_equal(new, node.left_verts)
        if changed:
            node.left_verts = new
    else:
        new = merge_side(t.right_verts, b.right_verts, RIGHT)
        changed = not chains_equal(new, node.right_verts)
        if changed:
            node.right_verts = new
    if recorder is not None:
        node.seq += 1
        recorder.append((id(node), side, node.seq))
    return changed


def merge_up(node, strategy, first_dirty, recorder=None):
    """Leaf-to-root conquer pass under the given locking strategy.

    first_dirty exempts the start node from the early-stop test (inserts and
    deletes pre-publish its chains, so an unchanged start node does not mean
    the ancestors are clean). Returns (levels_visited, early_stopped).
    """
    levels = 0
    exempt = first_dirty
    if strategy == FINER:
        # Two locks per node: the left chain is updated under leftLock, the
        # right under rightLock, releasing each as soon as possible.
        prev = None
        cur = node
        early = False
        while cur is not None:
            cur.acquire_left()
            if prev is not None:
                prev.release_right()
            changed = _update(cur, LEFT, recorder)
            cur.acquire_right()
            cur.release_left()
            if _update(cur, RIGHT, recorder):
                changed = True
            levels += 1
            prev = cur
            if not changed and not exempt:
                early = cur.parent is not None
                break
            exempt = False
            cur = cur.parent
        if prev is not None:
            prev.release_right()
        return levels, early
    if strategy == FINE:
        # One lock per node, hand-over-hand: parent locked before the
        # current node is released.
        cur = node
        cur.acquire_left()
        early = False
        while True:
            changed = _update(cur, LEFT, recorder)
            if _update(cur, RIGHT, recorder):
                changed = True
            levels += 1
            par = cur.parent
            if par is None or (not changed and not exempt):
                early = par is not None and not changed and not exempt
                cur.release_left()
                break
            exempt = False
            par.acquire_left()
            cur.release_left()
            cur = par
        return levels, early
    # Coarse: the tree-global lock is already held; no per-node locks.
    cur = node
    while cur is not None:
        changed = _update(cur, LEFT, recorder)
        if _update(cur, RIGHT, recorder):
            changed = True
        levels += 1
        if not changed and not exempt:
            return levels, cur.parent is not None
        exempt = False
        cur = cur.parent
    return levels, False
