"""Concurrent dynamic planar convex hulls.

A y-keyed external search tree whose internal nodes cache hull chain
snapshots, with coarse, fine, and finer (two locks per node) locking
strategies, plus a parallel divide-and-conquer batch hull and seeded
benchmark harnesses.
"""

from .chain import Bridge, Chain, Side, concat, conquer, find_bridge, is_tangent_at, split_at
from .errors import (
    ChainError,
    EmptyTreeError,
    GeneralPositionError,
    InputError,
    SeparationError,
)
from .geometry import (
    Orientation,
    Point,
    assert_general_position,
    dump_points,
    load_points,
    orientation,
)
from .hulltree import HullTree, ReadMode, Strategy
from .static_hull import StaticHullConfig, static_hull_parallel, static_hull_sequential
from .workload import (
    BenchResult,
    BenchRunSpec,
    Distribution,
    OperationMix,
    run_static,
    run_stress,
    run_throughput,
    sample,
)

__version__ = "0.1.0"

__all__ = [
    "Bridge",
    "Chain",
    "Side",
    "concat",
    "conquer",
    "find_bridge",
    "is_tangent_at",
    "split_at",
    "ChainError",
    "EmptyTreeError",
    "GeneralPositionError",
    "InputError",
    "SeparationError",
    "Orientation",
    "Point",
    "assert_general_position",
    "dump_points",
    "load_points",
    "orientation",
    "HullTree",
    "ReadMode",
    "Strategy",
    "StaticHullConfig",
    "static_hull_parallel",
    "static_hull_sequential",
    "BenchResult",
    "BenchRunSpec",
    "Distribution",
    "OperationMix",
    "run_static",
    "run_stress",
    "run_throughput",
    "sample",
    "oracle",
]

from . import oracle  # noqa: E402  (re-exported as a module for test plumbing)
