# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend.

Same contract as dynhull._kernels.pure: chain payloads are read-only (n, 2)
float64 arrays, left chains ascend in y, right chains descend. The bridge
walk, chain splice, equality, and point location run without the GIL, and
node locks are raw PyThread locks acquired with the GIL released, so
threads overlap wherever the locking strategy allows it.
"""

import numpy as np

cimport numpy as cnp
from cpython.pythread cimport (
    NOWAIT_LOCK,
    WAIT_LOCK,
    PyThread_acquire_lock,
    PyThread_allocate_lock,
    PyThread_free_lock,
    PyThread_release_lock,
    PyThread_type_lock,
)
from libc.string cimport memcmp, memcpy

from ..errors import SeparationError

cnp.import_array()

TAG = "compiled"
LEFT = 0
RIGHT = 1
COARSE = 0
FINE = 1
FINER = 2

cdef int _LEFT = 0
cdef int _RIGHT = 1
cdef int _COARSE = 0
cdef int _FINE = 1
cdef int _FINER = 2


cdef inline void _lock(PyThread_type_lock l):
    # Uncontended acquires keep the GIL (matching threading.Lock); only a
    # contended acquire parks with the GIL released.
    if PyThread_acquire_lock(l, NOWAIT_LOCK) == 1:
        return
    with nogil:
        PyThread_acquire_lock(l, WAIT_LOCK)


cdef class Node:
    """External-BST node; field semantics match the pure backend's Node.
    route is None for a leaf, else one immutable (key, top, bot) tuple."""

    cdef public object point
    cdef public object route
    cdef public object left_verts
    cdef public object right_verts
    cdef public object parent
    cdef public bint is_deleted
    cdef public long long seq
    cdef PyThread_type_lock _ll
    cdef PyThread_type_lock _rl

    def __cinit__(self, *args, **kwargs):
        self._ll = PyThread_allocate_lock()
        self._rl = PyThread_allocate_lock()
        if self._ll == NULL or self._rl == NULL:
            raise MemoryError("lock allocation failed")

    def __dealloc__(self):
        if self._ll != NULL:
            PyThread_free_lock(self._ll)
        if self._rl != NULL:
            PyThread_free_lock(self._rl)

    def __init__(self, point, left_verts, right_verts, parent=None):
        self.point = point
        self.route = None
        self.left_verts = left_verts
        self.right_verts = right_verts
        self.parent = parent
        self.is_deleted = False
        self.seq = 0

    @property
    def routing_key(self):
        r = self.route
        return None if r is None else r[0]

    cpdef bint acquire_left(self, bint blocking=True):
        if PyThread_acquire_lock(self._ll, NOWAIT_LOCK) == 1:
            return True
        if not blocking:
            return False
        with nogil:
            PyThread_acquire_lock(self._ll, WAIT_LOCK)
        return True

    cpdef release_left(self):
        PyThread_release_lock(self._ll)

    cpdef bint acquire_right(self, bint blocking=True):
        if PyThread_acquire_lock(self._rl, NOWAIT_LOCK) == 1:
            return True
        if not blocking:
            return False
        with nogil:
            PyThread_acquire_lock(self._rl, WAIT_LOCK)
        return True

    cpdef release_right(self):
        PyThread_release_lock(self._rl)


def new_leaf(point, parent=None):
    cdef cnp.ndarray v = np.empty((1, 2), dtype=np.float64)
    cdef double px = point[0]
    cdef double py = point[1]
    v[0, 0] = px
    v[0, 1] = py
    v.setflags(write=False)
    return Node((px, py), v, v, parent)


def find_leaf(Node node, double y):
    """Descend routing tuples until a leaf. Lock-free."""
    cdef tuple r
    while True:
        r = <tuple> node.route
        if r is None:
            return node
        if y >= <double> r[0]:
            node = <Node> r[1]
        else:
            node = <Node> r[2]


cdef inline double _cr(double ax, double ay, double bx, double by,
                       double cx, double cy) noexcept nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


cdef inline Py_ssize_t _sx(Py_ssize_t alen, Py_ssize_t vi, bint rev) noexcept nogil:
    return alen - 1 - vi if rev else vi


cdef struct _BW:
    Py_ssize_t ti
    Py_ssize_t bi
    Py_ssize_t adv
    int status  # 0 ok, 1 stuck on top, 2 stuck on bottom, 3 bound exceeded


cdef _BW _bridge(const double* top, Py_ssize_t n, const double* bot,
                 Py_ssize_t m, int side) noexcept nogil:
    # Alternating tangency walk in a y-increasing view of both chains;
    # rev maps view indices to storage for right (descending) chains.
    cdef _BW r
    cdef bint rev = side == _RIGHT
    cdef double sign = -1.0 if rev else 1.0
    cdef Py_ssize_t p = 0
    cdef Py_ssize_t q = m - 1
    cdef Py_ssize_t adv = 0
    cdef Py_ssize_t limit = n + m
    cdef Py_ssize_t si
    cdef double hix, hiy, lox, loy
    cdef bint moved, bad
    r.status = 0
    while True:
        moved = False
        while True:
            si = _sx(n, p, rev)
            hix = top[2 * si]
            hiy = top[2 * si + 1]
            si = _sx(m, q, rev)
            lox = bot[2 * si]
            loy = bot[2 * si + 1]
            bad = False
            if p + 1 < n:
                si = _sx(n, p + 1, rev)
                if sign * _cr(lox, loy, hix, hiy, top[2 * si], top[2 * si + 1]) > 0.0:
                    bad = True
            if not bad and p > 0:
                si = _sx(n, p - 1, rev)
                if sign * _cr(lox, loy, hix, hiy, top[2 * si], top[2 * si + 1]) > 0.0:
                    bad = True
            if not bad:
                break
            if p + 1 >= n:
                r.status = 1
                return r
            p += 1
            adv += 1
            moved = True
            if adv > limit:
                r.status = 3
                return r
        while True:
            si = _sx(n, p, rev)
            hix = top[2 * si]
            hiy = top[2 * si + 1]
            si = _sx(m, q, rev)
            lox = bot[2 * si]
            loy = bot[2 * si + 1]
            bad = False
            if q > 0:
                si = _sx(m, q - 1, rev)
                if sign * _cr(lox, loy, hix, hiy, bot[2 * si], bot[2 * si + 1]) > 0.0:
                    bad = True
            if not bad and q + 1 < m:
                si = _sx(m, q + 1, rev)
                if sign * _cr(lox, loy, hix, hiy, bot[2 * si], bot[2 * si + 1]) > 0.0:
                    bad = True
            if not bad:
                break
            if q == 0:
                r.status = 2
                return r
            q -= 1
            adv += 1
            moved = True
            if adv > limit:
                r.status = 3
                return r
        if not moved:
            break
    r.ti = _sx(n, p, rev)
    r.bi = _sx(m, q, rev)
    r.adv = adv
    return r


cdef const double[:, ::1] _view(object a):
    return np.ascontiguousarray(a, dtype=np.float64)


cdef int _sep_check(const double[:, ::1] tv, const double[:, ::1] bv,
                    int side) except -1:
    cdef Py_ssize_t n = tv.shape[0]
    cdef Py_ssize_t m = bv.shape[0]
    if n == 0 or m == 0:
        raise SeparationError("empty chain")
    cdef double tmin = tv[n - 1, 1] if side == _RIGHT else tv[0, 1]
    cdef double bmax = bv[0, 1] if side == _RIGHT else bv[m - 1, 1]
    if not tmin > bmax:
        raise SeparationError(
            f"top chain min y {tmin!r} not above bottom chain max y {bmax!r}"
        )
    return 0


cdef int _raise_status(int status) except -1:
    if status == 1:
        raise AssertionError("bridge walk stuck on top chain")
    if status == 2:
        raise AssertionError("bridge walk stuck on bottom chain")
    if status == 3:
        raise AssertionError("bridge walk exceeded advance bound")
    return 0


def find_bridge(top, bot, int side):
    """(top_index, bot_index, advances) in stored chain order."""
    cdef const double[:, ::1] tv = _view(top)
    cdef const double[:, ::1] bv = _view(bot)
    _sep_check(tv, bv, side)
    cdef _BW r
    with nogil:
        r = _bridge(&tv[0, 0], tv.shape[0], &bv[0, 0], bv.shape[0], side)
    _raise_status(r.status)
    return r.ti, r.bi, r.adv


cdef object _merge_to(object top, object bot, int side):
    cdef const double[:, ::1] tv = _view(top)
    cdef const double[:, ::1] bv = _view(bot)
    _sep_check(tv, bv, side)
    cdef Py_ssize_t n = tv.shape[0]
    cdef Py_ssize_t m = bv.shape[0]
    cdef _BW r
    with nogil:
        r = _bridge(&tv[0, 0], n, &bv[0, 0], m, side)
    _raise_status(r.status)
    cdef Py_ssize_t ka, kb
    cdef cnp.ndarray out
    cdef double[:, ::1] ov
    if side == _LEFT:
        ka = r.bi + 1
        kb = n - r.ti
        out = np.empty((ka + kb, 2), dtype=np.float64)
        ov = out
        with nogil:
            memcpy(&ov[0, 0], &bv[0, 0], ka * 2 * sizeof(double))
            memcpy(&ov[ka, 0], &tv[r.ti, 0], kb * 2 * sizeof(double))
    else:
        ka = r.ti + 1
        kb = m - r.bi
        out = np.empty((ka + kb, 2), dtype=np.float64)
        ov = out
        with nogil:
            memcpy(&ov[0, 0], &tv[0, 0], ka * 2 * sizeof(double))
            memcpy(&ov[ka, 0], &bv[r.bi, 0], kb * 2 * sizeof(double))
    out.setflags(write=False)
    return out


def merge_side(top, bot, int side):
    """Conquer one side: splice the chains at their bridge into a fresh
    read-only array."""
    return _merge_to(top, bot, side)


cdef bint _chains_eq(object a, object b):
    if a is b:
        return True
    cdef const double[:, ::1] av = _view(a)
    cdef const double[:, ::1] bv = _view(b)
    cdef Py_ssize_t n = av.shape[0]
    if n != bv.shape[0]:
        return False
    if n == 0:
        return True
    cdef int r
    with nogil:
        r = memcmp(&av[0, 0], &bv[0, 0], n * 2 * sizeof(double))
    return r == 0


def chains_equal(a, b):
    return _chains_eq(a, b)


cdef bint _contains(const double[:, ::1] lv, const double[:, ::1] rv,
                    double x, double y) noexcept nogil:
    cdef Py_ssize_t n = lv.shape[0]
    cdef Py_ssize_t m = rv.shape[0]
    cdef Py_ssize_t lo, hi, mid
    if n == 0 or m == 0:
        return False
    if y < lv[0, 1] or y > lv[n - 1, 1]:
        return False
    if n == 1:
        return x == lv[0, 0] and y == lv[0, 1]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if lv[mid, 1] <= y:
            lo = mid
        else:
            hi = mid
    if _cr(lv[lo, 0], lv[lo, 1], lv[lo + 1, 0], lv[lo + 1, 1], x, y) > 0.0:
        return False
    if y > rv[0, 1] or y < rv[m - 1, 1]:
        return False
    if m == 1:
        return x == rv[0, 0] and y == rv[0, 1]
    lo = 0
    hi = m - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rv[mid, 1] >= y:
            lo = mid
        else:
            hi = mid
    if _cr(rv[lo, 0], rv[lo, 1], rv[lo + 1, 0], rv[lo + 1, 1], x, y) > 0.0:
        return False
    return True


def contains_hull(left, right, double x, double y):
    """Point-in-hull test against raw chain snapshots; boundary counts."""
    cdef const double[:, ::1] lv = _view(left)
    cdef const double[:, ::1] rv = _view(right)
    cdef bint res
    with nogil:
        res = _contains(lv, rv, x, y)
    return res


cdef int _update(Node node, int side, object recorder) except -1:
    cdef tuple r = <tuple> node.route
    if r is None:
        return 0
    cdef Node t = <Node> r[1]
    cdef Node b = <Node> r[2]
    cdef object new_arr
    cdef bint changed
    if side == _LEFT:
        new_arr = _merge_to(t.left_verts, b.left_verts, _LEFT)
        changed = not _chains_eq(new_arr, node.left_verts)
        if changed:
            node.left_verts = new_arr
    else:
        new_arr = _merge_to(t.right_verts, b.right_verts, _RIGHT)
        changed = not _chains_eq(new_arr, node.right_verts)
        if changed:
            node.right_verts = new_arr
    if recorder is not None:
        node.seq += 1
        recorder.append((id(node), side, node.seq))
    return changed


def merge_up(Node node, int strategy, bint first_dirty, recorder=None):
    """Leaf-to-root conquer pass under the given locking strategy; see the
    pure backend for the choreography. Returns (levels, early_stopped)."""
    cdef Py_ssize_t levels = 0
    cdef bint exempt = first_dirty
    cdef bint changed
    cdef bint early = False
    cdef Node cur = node
    cdef Node prev = None
    cdef Node par
    if strategy == _FINER:
        while cur is not None:
            _lock(cur._ll)
            if prev is not None:
                PyThread_release_lock(prev._rl)
            changed = _update(cur, _LEFT, recorder) != 0
            _lock(cur._rl)
            PyThread_release_lock(cur._ll)
            if _update(cur, _RIGHT, recorder) != 0:
                changed = True
            levels += 1
            prev = cur
            if not changed and not exempt:
                early = cur.parent is not None
                break
            exempt = False
            cur = <Node> cur.parent
        if prev is not None:
            PyThread_release_lock(prev._rl)
        return levels, early
    if strategy == _FINE:
        _lock(cur._ll)
        while True:
            changed = _update(cur, _LEFT, recorder) != 0
            if _update(cur, _RIGHT, recorder) != 0:
                changed = True
            levels += 1
            par = <Node> cur.parent
            if par is None or (not changed and not exempt):
                early = par is not None and not changed and not exempt
                PyThread_release_lock(cur._ll)
                break
            exempt = False
            _lock(par._ll)
            PyThread_release_lock(cur._ll)
            cur = par
        return levels, early
    while cur is not None:
        changed = _update(cur, _LEFT, recorder) != 0
        if _update(cur, _RIGHT, recorder) != 0:
            changed = True
        levels += 1
        if not changed and not exempt:
            return levels, cur.parent is not None
        exempt = False
        cur = <Node> cur.parent
    return levels, False
