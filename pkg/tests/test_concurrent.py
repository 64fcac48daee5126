"""Multi-threaded behaviour: stress audits, reader consistency, flag
monotonicity, and deadlock-free completion."""

import threading

import numpy as np
import pytest

from dynhull.hulltree import HullTree, ReadMode, Strategy
from dynhull.workload import Distribution, OperationMix, run_stress, sample

from conftest import BACKEND_NAMES

STRATEGIES = [Strategy.COARSE, Strategy.FINE, Strategy.FINER]


def _spawn_writers(tree, n_threads, per_thread, seed, stop_event=None):
    """Each writer inserts its own point stream and deletes half of it."""

    errors = []

    def work(stream_id):
        rng = np.random.default_rng((seed, stream_id))
        try:
            mine = []
            for i in range(per_thread):
                x = float(rng.uniform(0.0, 10.0))
                y = float(rng.uniform(0.0, 10.0))
                if tree.insert((x, y)):
                    mine.append((x, y))
                if i % 2 == 0 and mine:
                    victim = mine.pop(int(rng.integers(0, len(mine))))
                    tree.delete(victim)
        except BaseException as exc:  # surfaced by the main thread
            errors.append(exc)
        finally:
            if stop_event is not None:
                stop_event.set()

    threads = [
        threading.Thread(target=work, args=(i,), daemon=True) for i in range(n_threads)
    ]
    for t in threads:
        t.start()
    return threads, errors


@pytest.mark.parametrize("strategy", STRATEGIES)
@pytest.mark.parametrize("backend", BACKEND_NAMES)
def test_stress_audit_per_strategy(strategy, backend):
    report = run_stress(
        strategy,
        OperationMix(0, 50, 50),
        Distribution.annulus(17),
        threads=8,
        total_ops=20_000,
        prepopulation=512,
        backend=backend,
        timeout_s=60.0,
    )
    assert report.ops_total == 20_000
    assert report.audit_ok
    assert report.final_size > 0
    assert report.seconds < 60.0


def test_stress_with_reads_mixed_in():
    report = run_stress(
        Strategy.FINER,
        OperationMix(70, 15, 15),
        Distribution.circle(23),
        threads=6,
        total_ops=18_000,
        prepopulation=1024,
        read_mode=ReadMode.RETRY_UNTIL_CONSISTENT,
        timeout_s=60.0,
    )
    assert report.audit_ok


def test_retry_readers_always_see_matching_endpoints():
    tree = HullTree(Strategy.FINER)
    for x, y in sample(Distribution.annulus(31), 2048).tolist():
        tree.insert((x, y))
    done = threading.Event()
    writers, werrs = _spawn_writers(tree, 6, 2500, seed=77, stop_event=done)
    reads = 0
    violations = 0
    while not done.is_set():
        left, right = tree.get_hull(ReadMode.RETRY_UNTIL_CONSISTENT)
        reads += 1
        if len(left) and len(right):
            if left.top != right.top or left.bottom != right.bottom:
                violations += 1
    for t in writers:
        t.join(60)
        assert not t.is_alive()
    assert not werrs
    assert violations == 0
    assert reads > 100  # the reader really ran against live writers


def test_convexify_readers_return_valid_chains():
    tree = HullTree(Strategy.FINER)
    for x, y in sample(Distribution.circle(37), 1024).tolist():
        tree.insert((x, y))
    done = threading.Event()
    writers, werrs = _spawn_writers(tree, 4, 2000, seed=99, stop_event=done)
    reads = 0
    while not done.is_set():
        left, right = tree.get_hull(ReadMode.CONVEXIFY)
        reads += 1
        if len(left) >= 2 and len(right) >= 2:
            left.validate()
            right.validate()
            assert left.top == right.top
            assert left.bottom == right.bottom
    for t in writers:
        t.join(60)
        assert not t.is_alive()
    assert not werrs
    assert reads > 100


def test_deleted_flags_never_clear_under_churn():
    tree = HullTree(Strategy.FINER)
    for x, y in sample(Distribution.square(41), 512).tolist():
        tree.insert((x, y))
    done = threading.Event()
    writers, werrs = _spawn_writers(tree, 4, 3000, seed=5, stop_event=done)
    flagged = {}
    scans = 0
    while not done.is_set():
        # Snapshot every reachable node; previously-flagged nodes must
        # still be flagged whenever they are observed again.
        stack = [tree._root]
        while stack:
            node = stack.pop()
            if node is None:
                continue
            key = id(node)
            if node.is_deleted:
                flagged[key] = node  # keep the ref so the id stays valid
            elif key in flagged:
                raise AssertionError("deleted flag was cleared")
            route = node.route
            if route is not None:
                stack.append(route[1])
                stack.append(route[2])
        scans += 1
    for t in writers:
        t.join(60)
        assert not t.is_alive()
    assert not werrs
    assert scans > 10

    # The scanner only catches a tombstone when it races the unlink, so it
    # can come up empty. Prove deletes set the flag with a quiescent
    # snapshot: hold every reachable node, delete, check the held refs.
    snapshot = []
    stack = [tree._root]
    while stack:
        node = stack.pop()
        if node is None:
            continue
        snapshot.append(node)
        route = node.route
        if route is not None:
            stack.append(route[1])
            stack.append(route[2])
    for p in tree.points()[:4]:
        assert tree.delete(p)
    assert sum(1 for node in snapshot if node.is_deleted) >= 4


def test_concurrent_inserts_only_match_oracle():
    tree = HullTree(Strategy.FINER)
    pts = sample(Distribution.circle(53), 4096)
    chunks = [pts[i::8] for i in range(8)]
    errors = []

    def insert_all(rows):
        try:
            for x, y in rows.tolist():
                tree.insert((x, y))
        except BaseException as exc:
            errors.append(exc)

    threads = [threading.Thread(target=insert_all, args=(c,)) for c in chunks]
    for t in threads:
        t.start()
    for t in threads:
        t.join(60)
        assert not t.is_alive()
    assert not errors
    from dynhull.oracle import oracle_hull

    left, right = tree.get_hull()
    want_l, want_r = oracle_hull(pts)
    assert left == want_l and right == want_r
    tree.audit()


def test_stress_timeout_guard_fires():
    # A worker pool that cannot finish within the deadline must raise, not hang.
    with pytest.raises(TimeoutError):
        run_stress(
            Strategy.FINER,
            OperationMix(0, 50, 50),
            Distribution.annulus(3),
            threads=4,
            total_ops=50_000_000,
            prepopulation=256,
            timeout_s=0.3,
        )
