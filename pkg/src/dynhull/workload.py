"""Workload generation and the benchmark harnesses.

Three point distributions (uniform square, area-uniform disc, thin
area-uniform annulus), an operation-mix throughput harness over the
concurrent tree, a fixed-operation-count stress harness, and the static
batch harness. All sampling is seeded and reproducible; every throughput
and stress run ends with a quiescent audit comparing the surviving point
set and its hull against the brute-force oracle.
"""

from __future__ import annotations

import faulthandler
import sys
import threading
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _kernels
from .chain import Chain
from .errors import GeneralPositionError, InputError
from .hulltree import HullTree, ReadMode, Strategy
from .oracle import oracle_hull
from .static_hull import StaticHullConfig, static_hull_parallel, static_hull_sequential

_KINDS = ("square", "circle", "annulus")


@dataclass(frozen=True)
class Distribution:
    """Seeded point distribution. square: uniform on [0, side]^2. circle:
    area-uniform on a disc of the given radius. annulus: area-uniform
    between r_min and r_max (nearly every point is a hull candidate)."""

    kind: str
    seed: int
    side: float = 10.0
    radius: float = 10.0
    r_min: float = 9.999
    r_max: float = 10.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown distribution {self.kind!r}")
        if self.side <= 0.0 or self.radius <= 0.0:
            raise InputError("side and radius must be positive")
        if not 0.0 < self.r_min < self.r_max:
            raise InputError("annulus radii must satisfy 0 < r_min < r_max")

    @classmethod
    def square(cls, seed: int) -> "Distribution":
        return cls("square", seed)

    @classmethod
    def circle(cls, seed: int) -> "Distribution":
        return cls("circle", seed)

    @classmethod
    def annulus(cls, seed: int) -> "Distribution":
        return cls("annulus", seed)


def _draw(rng: np.random.Generator, dist: Distribution, n: int) -> np.ndarray:
    if dist.kind == "square":
        return rng.uniform(0.0, dist.side, (n, 2))
    if dist.kind == "circle":
        r = dist.radius * np.sqrt(rng.random(n))
    else:
        lo2 = dist.r_min * dist.r_min
        hi2 = dist.r_max * dist.r_max
        r = np.sqrt(lo2 + rng.random(n) * (hi2 - lo2))
    theta = rng.random(n) * (2.0 * np.pi)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def _draw_unique_y(rng: np.random.Generator, dist: Distribution, n: int) -> np.ndarray:
    pts = _draw(rng, dist, n)
    while True:
        ys = pts[:, 1]
        uniq, first = np.unique(ys, return_index=True)
        if uniq.size == ys.size:
            return pts
        keep = np.zeros(ys.size, dtype=bool)
        keep[first] = True
        pts[~keep] = _draw(rng, dist, int((~keep).sum()))


def sample(distribution: Distribution, n: int) -> np.ndarray:
    """n points as an (n, 2) float64 array with pairwise distinct y
    coordinates. Same distribution object, same output."""
    if n < 0:
        raise InputError(f"n must be >= 0, got {n}")
    rng = np.random.default_rng(distribution.seed)
    return _draw_unique_y(rng, distribution, n)


@dataclass(frozen=True)
class OperationMix:
    """Percentages of getHull / insert / delete operations."""

    read_pct: float
    insert_pct: float
    delete_pct: float

    def __post_init__(self):
        parts = (self.read_pct, self.insert_pct, self.delete_pct)
        if any(p < 0 for p in parts):
            raise InputError(f"negative percentage in {parts}")
        if abs(sum(parts) - 100.0) > 1e-9:
            raise InputError(f"mix must sum to 100, got {sum(parts)}")

    @classmethod
    def parse(cls, text: str) -> "OperationMix":
        try:
            r, i, d = (float(part) for part in text.split(","))
        except ValueError as exc:
            raise InputError(f"mix must be 'R,I,D', got {text!r}") from exc
        return cls(r, i, d)

    def __str__(self) -> str:
        return "/".join(f"{p:g}" for p in (self.read_pct, self.insert_pct, self.delete_pct))


@dataclass(frozen=True)
class BenchRunSpec:
    strategy: Strategy
    mix: OperationMix
    distribution: Distribution
    threads: int
    warmup_s: float = 2.0
    measure_s: float = 15.0
    repetitions: int = 6
    prepopulation: int = 65536
    read_mode: ReadMode = ReadMode.RAW
    backend: Optional[str] = None
    audit: bool = True
    timeout_s: Optional[float] = None


@dataclass
class RunRecord:
    rep: int
    ops_total: int
    seconds: float
    ops_per_sec: float
    retries: int
    early_stops: int
    audit_ok: Optional[bool]


@dataclass
class BenchResult:
    spec: BenchRunSpec
    runs: List[RunRecord] = field(default_factory=list)

    @property
    def ops_per_sec_mean(self) -> float:
        return float(np.mean([r.ops_per_sec for r in self.runs]))

    @property
    def ci_half_width(self) -> float:
        """Half-width of the 95% t-distribution confidence interval."""
        vals = [r.ops_per_sec for r in self.runs]
        k = len(vals)
        if k < 2:
            return 0.0
        from scipy.stats import t as student_t

        return float(
            student_t.ppf(0.975, k - 1) * np.std(vals, ddof=1) / np.sqrt(k)
        )


class _Worker(threading.Thread):
    """One benchmark thread: draws operations from the mix, appending
    successful inserts/deletes to private logs for the final audit."""

    def __init__(self, tree, dist, mix, read_mode, rng, shared_log, stop, budget):
        super().__init__(daemon=True)
        self.tree = tree
        self.dist = dist
        self.read_thr = mix.read_pct
        self.ins_thr = mix.read_pct + mix.insert_pct
        self.read_mode = read_mode
        self.rng = rng
        self.shared_log = shared_log
        self.stop = stop
        self.budget = budget  # None for time-driven runs
        self.ops = 0
        self.inserted: list = []
        self.deleted: list = []
        self.error: Optional[BaseException] = None

    def run(self):
        try:
            self._loop()
        except BaseException as exc:  # surfaced by the harness
            self.error = exc
            self.stop.set()

    def _loop(self):
        tree = self.tree
        rng = self.rng
        log = self.shared_log
        stop = self.stop
        mode = self.read_mode
        buf = _draw(rng, self.dist, 512)
        buf_i = 0
        remaining = self.budget
        while not stop.is_set():
            if remaining is not None:
                if remaining == 0:
                    break
                remaining -= 1
            u = rng.random() * 100.0
            if u < self.read_thr:
                tree.get_hull(mode)
            elif u < self.ins_thr:
                if buf_i >= buf.shape[0]:
                    buf = _draw(rng, self.dist, 512)
                    buf_i = 0
                pt = (float(buf[buf_i, 0]), float(buf[buf_i, 1]))
                buf_i += 1
                try:
                    if tree.insert(pt):
                        self.inserted.append(pt)
                        log.append(pt)
                except GeneralPositionError:
                    # Cross-thread y collision; astronomically rare with
                    # 53-bit coordinates but not impossible.
                    pass
            else:
                nlog = len(log)
                if nlog:
                    pt = log[int(rng.integers(nlog))]
                    if tree.delete(pt):
                        self.deleted.append(pt)
            self.ops += 1


def _audit(tree: HullTree, prepop_pts, workers) -> bool:
    expected = set(map(tuple, prepop_pts))
    for w in workers:
        expected.update(w.inserted)
    for w in workers:
        expected.difference_update(w.deleted)
    actual = set((p.x, p.y) for p in tree.points())
    if actual != expected:
        return False
    want = oracle_hull(np.array(sorted(expected)) if expected else [])
    got = tree.get_hull(ReadMode.RAW)
    return got[0] == want[0] and got[1] == want[1]


def _join_or_dump(workers, timeout: float, stop: Optional[threading.Event] = None):
    deadline = time.monotonic() + timeout
    for w in workers:
        w.join(max(0.0, deadline - time.monotonic()))
    alive = [w for w in workers if w.is_alive()]
    if alive:
        if stop is not None:
            stop.set()  # keep unfinished workers from spinning on after the raise
        faulthandler.dump_traceback(file=sys.stderr)
        raise TimeoutError(
            f"{len(alive)} worker thread(s) still running after {timeout:.0f}s"
        )


def _build_tree(spec_strategy, backend) -> HullTree:
    return HullTree(Strategy(spec_strategy), kernels=_kernels.backend(backend))


def run_throughput(spec: BenchRunSpec) -> BenchResult:
    """Timed operation-mix benchmark: per repetition, prepopulate a fresh
    tree, run `threads` workers, discard the warmup window, and report ops
    completed in the measurement window."""
    result = BenchResult(spec)
    for rep in range(spec.repetitions):
        tree = _build_tree(spec.strategy, spec.backend)
        ss = np.random.SeedSequence((spec.distribution.seed, rep))
        streams = ss.spawn(spec.threads + 1)
        prng = np.random.default_rng(streams[0])
        prepop = _draw_unique_y(prng, spec.distribution, spec.prepopulation)
        for x, y in prepop.tolist():
            tree.insert((x, y))
        shared_log = [tuple(p) for p in prepop.tolist()]
        stop = threading.Event()
        workers = [
            _Worker(
                tree,
                spec.distribution,
                spec.mix,
                spec.read_mode,
                np.random.default_rng(streams[1 + i]),
                shared_log,
                stop,
                None,
            )
            for i in range(spec.threads)
        ]
        for w in workers:
            w.start()
        time.sleep(spec.warmup_s)
        c1 = sum(w.ops for w in workers)
        t1 = time.perf_counter()
        time.sleep(spec.measure_s)
        c2 = sum(w.ops for w in workers)
        t2 = time.perf_counter()
        stop.set()
        timeout = spec.timeout_s or max(60.0, 4.0 * (spec.warmup_s + spec.measure_s))
        _join_or_dump(workers, timeout, stop)
        for w in workers:
            if w.error is not None:
                raise w.error
        audit_ok = _audit(tree, prepop.tolist(), workers) if spec.audit else None
        if spec.audit and not audit_ok:
            raise AssertionError(f"post-run audit failed (rep {rep})")
        seconds = t2 - t1
        ops_total = c2 - c1
        result.runs.append(
            RunRecord(
                rep=rep,
                ops_total=ops_total,
                seconds=seconds,
                ops_per_sec=ops_total / seconds if seconds > 0 else 0.0,
                retries=tree.stats.retries,
                early_stops=tree.stats.early_stops,
                audit_ok=audit_ok,
            )
        )
    return result


@dataclass
class StressReport:
    ops_total: int
    seconds: float
    retries: int
    early_stops: int
    final_size: int
    hull_size: int
    audit_ok: bool


def run_stress(
    strategy,
    mix: OperationMix,
    distribution: Distribution,
    threads: int,
    total_ops: int,
    prepopulation: int = 1024,
    read_mode: ReadMode = ReadMode.RAW,
    backend: Optional[str] = None,
    timeout_s: float = 60.0,
) -> StressReport:
    """Fixed-operation-count stress run with a deadlock timeout. Each worker
    executes its share of total_ops; the run fails if the workers have not
    finished within timeout_s or the final audit disagrees with the oracle."""
    tree = _build_tree(strategy, backend)
    ss = np.random.SeedSequence((distribution.seed, total_ops, threads))
    streams = ss.spawn(threads + 1)
    prng = np.random.default_rng(streams[0])
    prepop = _draw_unique_y(prng, distribution, prepopulation)
    for x, y in prepop.tolist():
        tree.insert((x, y))
    shared_log = [tuple(p) for p in prepop.tolist()]
    stop = threading.Event()
    share = total_ops // threads
    budgets = [share + (1 if i < total_ops % threads else 0) for i in range(threads)]
    workers = [
        _Worker(
            tree,
            distribution,
            mix,
            read_mode,
            np.random.default_rng(streams[1 + i]),
            shared_log,
            stop,
            budgets[i],
        )
        for i in range(threads)
    ]
    t0 = time.perf_counter()
    for w in workers:
        w.start()
    _join_or_dump(workers, timeout_s, stop)
    seconds = time.perf_counter() - t0
    for w in workers:
        if w.error is not None:
            raise w.error
    audit_ok = _audit(tree, prepop.tolist(), workers)
    left, right = tree.get_hull(ReadMode.RAW)
    return StressReport(
        ops_total=sum(w.ops for w in workers),
        seconds=seconds,
        retries=tree.stats.retries,
        early_stops=tree.stats.early_stops,
        final_size=len(tree.points()),
        hull_size=hull_vertex_count(left, right),
        audit_ok=audit_ok,
    )


def hull_vertex_count(left: Chain, right: Chain) -> int:
    n = len(left) + len(right)
    if n == 0:
        return 0
    if len(left) == 1 and len(right) == 1:
        return 1
    return n - 2  # top and bottom vertices sit on both chains


@dataclass
class StaticRunResult:
    engine: str
    n: int
    threads: int
    seconds: float
    hull: Tuple[Chain, Chain]
    hull_size: int
    oracle_match: Optional[bool]


def run_static(
    distribution: Distribution,
    n: int,
    engine: str,
    threads: int,
    rep: int = 0,
    cutoff: int = 2000,
    backend: Optional[str] = None,
    points: Optional[np.ndarray] = None,
    audit: bool = True,
) -> StaticRunResult:
    """One static-batch run. engine 'sequential' and 'parallel' run the
    divide-and-conquer batch hull; 'dynamic' streams the points through the
    concurrent tree (Finer strategy) with a contains-then-insert filter and
    reads the final hull in Convexify mode. Timing covers the engine only,
    not sampling or the oracle check."""
    kern = _kernels.backend(backend)
    if points is None:
        rng = np.random.default_rng(np.random.SeedSequence((distribution.seed, rep)))
        pts = _draw_unique_y(rng, distribution, n)
    else:
        pts = np.asarray(points, dtype=np.float64)
        n = pts.shape[0]
    if engine == "sequential":
        t0 = time.perf_counter()
        hull = static_hull_sequential(pts, kernels=kern)
        seconds = time.perf_counter() - t0
    elif engine == "parallel":
        cfg = StaticHullConfig(cutoff=cutoff, parallelism=threads)
        t0 = time.perf_counter()
        hull = static_hull_parallel(pts, cfg, kernels=kern)
        seconds = time.perf_counter() - t0
    elif engine == "dynamic":
        tree = HullTree(Strategy.FINER, kernels=kern)
        errors: list = []

        def feed(rows):
            try:
                for x, y in rows.tolist():
                    if not tree.contains((x, y)):
                        tree.insert((x, y))
            except BaseException as exc:
                errors.append(exc)

        t0 = time.perf_counter()
        if threads <= 1:
            feed(pts)
        else:
            ts = [
                threading.Thread(target=feed, args=(pts[i::threads],), daemon=True)
                for i in range(threads)
            ]
            for t in ts:
                t.start()
            for t in ts:
                t.join()
        if errors:
            raise errors[0]
        hull = tree.get_hull(ReadMode.CONVEXIFY)
        seconds = time.perf_counter() - t0
    else:
        raise InputError(f"unknown engine {engine!r}")
    match: Optional[bool] = None
    if audit:
        want = oracle_hull(pts)
        match = hull[0] == want[0] and hull[1] == want[1]
    return StaticRunResult(
        engine=engine,
        n=n,
        threads=threads,
        seconds=seconds,
        hull=hull,
        hull_size=hull_vertex_count(*hull),
        oracle_match=match,
    )
