"""Planar primitives: points, the orientation predicate, general-position
checks, and the plain-text point file format.

Coordinates are IEEE doubles and the orientation test is the direct sign of
the 2x2 determinant. At the coordinate magnitudes this package works with
(tens, not billions) that is reliable for inputs that are not adversarially
close to degenerate; exact arithmetic is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import InputError


class Point(NamedTuple):
    x: float
    y: float


class Orientation(Enum):
    LEFT = 1
    COLLINEAR = 0
    RIGHT = -1


def require_finite_point(p) -> Point:
    """Coerce p to a Point, rejecting non-finite coordinates."""
    try:
        x, y = p
        x = float(x)
        y = float(y)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a point: {p!r}") from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InputError(f"non-finite coordinates: ({x!r}, {y!r})")
    return Point(x, y)


def cross(a, b, c) -> float:
    """Signed area times two of triangle (a, b, c)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orientation(a, b, c) -> Orientation:
    """Which side of the directed line a->b the point c lies on.

    Positive cross product means c is to the left, negative to the right,
    exactly zero collinear. Inputs must be finite.
    """
    a = require_finite_point(a)
    b = require_finite_point(b)
    c = require_finite_point(c)
    d = cross(a, b, c)
    if d > 0.0:
        return Orientation.LEFT
    if d < 0.0:
        return Orientation.RIGHT
    return Orientation.COLLINEAR


@dataclass(frozen=True)
class GeneralPositionViolation:
    """First violation found: kind is 'duplicate-y' or 'collinear'."""

    kind: str
    indices: tuple
    points: tuple

    def __str__(self) -> str:
        pts = ", ".join(repr(tuple(p)) for p in self.points)
        return f"{self.kind} at indices {self.indices}: {pts}"


def assert_general_position(points: Sequence) -> Optional[GeneralPositionViolation]:
    """Check that no two points share a y coordinate and no three points are
    collinear. Returns None when the set is in general position, otherwise a
    report of the first violation found. O(n^2) for the y check (hashed),
    O(n^3) for collinearity; intended for tests and small inputs.
    """
    pts = [require_finite_point(p) for p in points]
    seen: dict = {}
    for i, p in enumerate(pts):
        j = seen.get(p.y)
        if j is not None:
            return GeneralPositionViolation("duplicate-y", (j, i), (pts[j], p))
        seen[p.y] = i
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if cross(pts[i], pts[j], pts[k]) == 0.0:
                    return GeneralPositionViolation(
                        "collinear", (i, j, k), (pts[i], pts[j], pts[k])
                    )
    return None


def dump_points(points: Iterable, path) -> None:
    """Write points as one "x y" pair per line (repr round-trips doubles)."""
    with open(path, "w", encoding="ascii") as fh:
        for p in points:
            # repr of a builtin float round-trips exactly; numpy scalars don't.
            fh.write(f"{float(p[0])!r} {float(p[1])!r}\n")


def load_points(path) -> list:
    """Read the dump_points format back as a list of Point."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected 'x y', got {line!r}")
            try:
                xy = (float(parts[0]), float(parts[1]))
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: not numeric: {line!r}") from exc
            out.append(require_finite_point(xy))
    return out
