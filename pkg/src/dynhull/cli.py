"""`bench` command line: throughput and static-batch experiments.

CSV schemas:
  throughput: strategy,mix,dist,threads,rep,ops_total,ops_per_sec,retries,early_stops
  static:     engine,dist,n,threads,rep,seconds,hull_size,oracle_match
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from . import _kernels
from .geometry import dump_points, load_points
from .hulltree import HullTree, ReadMode, Strategy
from .static_hull import static_hull_sequential
from .workload import (
    BenchRunSpec,
    Distribution,
    OperationMix,
    run_static,
    run_throughput,
    sample,
)

_READ_MODES = {
    "raw": ReadMode.RAW,
    "retry": ReadMode.RETRY_UNTIL_CONSISTENT,
    "convexify": ReadMode.CONVEXIFY,
}


def _dist_args(sub, dist_required=True):
    sub.add_argument(
        "--dist", choices=["square", "circle", "annulus"], required=dist_required
    )
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="CSV output path (default stdout)")
    sub.add_argument(
        "--backend",
        choices=["default", "pure", "compiled"],
        default="default",
        help="kernel backend to run against",
    )
    sub.add_argument(
        "--points-file", default=None, help="read points from an 'x y' per-line file"
    )
    sub.add_argument(
        "--dump-points", default=None, help="write the generated points to a file"
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    tp = sub.add_parser("throughput", help="timed operation-mix benchmark")
    tp.add_argument("--strategy", choices=["coarse", "fine", "finer"], required=True)
    tp.add_argument("--mix", required=True, help="read,insert,delete percentages, e.g. 0,50,50")
    tp.add_argument("--threads", type=int, required=True)
    tp.add_argument("--warmup-s", type=float, default=2.0)
    tp.add_argument("--measure-s", type=float, default=15.0)
    tp.add_argument("--reps", type=int, default=6)
    tp.add_argument("--prepop", type=int, default=65536)
    tp.add_argument("--read-mode", choices=sorted(_READ_MODES), default="raw")
    tp.add_argument("--no-audit", action="store_true", help="skip the post-run audit")
    _dist_args(tp)

    st = sub.add_parser("static", help="static batch hull benchmark")
    st.add_argument(
        "--engine", choices=["sequential", "parallel", "dynamic"], required=True
    )
    st.add_argument("--n", type=int, default=None)
    st.add_argument("--threads", type=int, default=1)
    st.add_argument("--reps", type=int, default=10)
    st.add_argument("--cutoff", type=int, default=2000)
    st.add_argument("--no-audit", action="store_true", help="skip the oracle check")
    # --n and --dist may be replaced by --points-file; checked in _cmd_static.
    _dist_args(st, dist_required=False)

    bk = sub.add_parser("backends", help="compare compiled and pure kernels")
    bk.add_argument("--n", type=int, default=200000)
    bk.add_argument("--ops", type=int, default=20000)
    bk.add_argument("--seed", type=int, default=0)
    return ap


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _cmd_throughput(args) -> int:
    dist = Distribution(args.dist, args.seed)
    spec = BenchRunSpec(
        strategy=Strategy(args.strategy),
        mix=OperationMix.parse(args.mix),
        distribution=dist,
        threads=args.threads,
        warmup_s=args.warmup_s,
        measure_s=args.measure_s,
        repetitions=args.reps,
        prepopulation=args.prepop,
        read_mode=_READ_MODES[args.read_mode],
        backend=None if args.backend == "default" else args.backend,
        audit=not args.no_audit,
    )
    if args.dump_points:
        dump_points(sample(dist, args.prepop), args.dump_points)
    result = run_throughput(spec)
    out = _open_out(args.out)
    try:
        w = csv.writer(out)
        w.writerow(
            [
                "strategy",
                "mix",
                "dist",
                "threads",
                "rep",
                "ops_total",
                "ops_per_sec",
                "retries",
                "early_stops",
            ]
        )
        for r in result.runs:
            w.writerow(
                [
                    args.strategy,
                    str(spec.mix),
                    args.dist,
                    args.threads,
                    r.rep,
                    r.ops_total,
                    f"{r.ops_per_sec:.2f}",
                    r.retries,
                    r.early_stops,
                ]
            )
    finally:
        if out is not sys.stdout:
            out.close()
    print(
        f"{args.strategy} {spec.mix} {args.dist} threads={args.threads}: "
        f"{result.ops_per_sec_mean:,.0f} ops/s "
        f"(95% CI +/- {result.ci_half_width:,.0f}, {args.reps} reps)",
        file=sys.stderr,
    )
    return 0


def _cmd_static(args) -> int:
    if args.points_file is None and (args.n is None or args.dist is None):
        print(
            "bench static: --n and --dist are required unless --points-file is given",
            file=sys.stderr,
        )
        return 2
    dist_label = args.dist if args.dist else "file"
    dist = Distribution(args.dist or "square", args.seed)
    points = None
    if args.points_file:
        points = np.array([list(p) for p in load_points(args.points_file)])
    out = _open_out(args.out)
    rows = []
    try:
        w = csv.writer(out)
        w.writerow(
            ["engine", "dist", "n", "threads", "rep", "seconds", "hull_size", "oracle_match"]
        )
        for rep in range(args.reps):
            res = run_static(
                dist,
                args.n,
                args.engine,
                args.threads,
                rep=rep,
                cutoff=args.cutoff,
                backend=None if args.backend == "default" else args.backend,
                points=points,
                audit=not args.no_audit,
            )
            if args.dump_points and rep == 0 and points is None:
                rng = np.random.default_rng(np.random.SeedSequence((dist.seed, 0)))
                from .workload import _draw_unique_y

                dump_points(_draw_unique_y(rng, dist, args.n), args.dump_points)
            rows.append(res)
            w.writerow(
                [
                    args.engine,
                    dist_label,
                    res.n,
                    args.threads,
                    rep,
                    f"{res.seconds:.6f}",
                    res.hull_size,
                    "" if res.oracle_match is None else str(res.oracle_match).lower(),
                ]
            )
    finally:
        if out is not sys.stdout:
            out.close()
    secs = [r.seconds for r in rows]
    print(
        f"{args.engine} {dist_label} n={rows[0].n} threads={args.threads}: "
        f"mean {np.mean(secs):.4f}s over {args.reps} reps"
        + ("" if rows[0].oracle_match is None else f", oracle_match={all(r.oracle_match for r in rows)}"),
        file=sys.stderr,
    )
    return 0


def _cmd_backends(args) -> int:
    """Side-by-side kernel comparison: batch hull time and a single-thread
    insert-heavy tree run for each available backend."""
    dist = Distribution.circle(args.seed)
    pts = sample(dist, args.n)
    names = []
    for name in ("compiled", "pure"):
        try:
            _kernels.backend(name)
        except ImportError:
            print(f"{name}: unavailable", file=sys.stderr)
            continue
        names.append(name)
    print(f"{'backend':<10} {'static_hull(s)':>15} {'tree_ops/s':>12}")
    for name in names:
        kern = _kernels.backend(name)
        t0 = time.perf_counter()
        static_hull_sequential(pts, kernels=kern)
        t_static = time.perf_counter() - t0
        tree = HullTree(Strategy.FINER, kernels=kern)
        stream = sample(Distribution.annulus(args.seed + 1), args.ops)
        t0 = time.perf_counter()
        for x, y in stream.tolist():
            tree.insert((x, y))
        t_ops = time.perf_counter() - t0
        print(f"{name:<10} {t_static:>15.4f} {args.ops / t_ops:>12,.0f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "throughput":
        return _cmd_throughput(args)
    if args.command == "static":
        return _cmd_static(args)
    return _cmd_backends(args)


if __name__ == "__main__":
    sys.exit(main())
