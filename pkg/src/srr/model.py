"""Domain types shared by every module: rank-space points, rectangles, probe counters.

Coordinates live in two spaces. ORIGINAL space is whatever signed 64-bit
integers the caller supplies; RANK space is the permutation grid [1..n] x [1..n]
obtained by replacing each coordinate with its 1-based rank. All indices and
ranks in this package are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class DuplicateCoordinate(ValueError):
    """Raised when two input points share an x or a y coordinate."""

    def __init__(self, axis: str, value: int, first_line: int, second_line: int):
        self.axis = axis
        self.value = value
        self.first_line = first_line
        self.second_line = second_line
        super().__init__(
            f"DuplicateCoordinate({axis}, {value}, lines {first_line} and {second_line})"
        )


class OutOfRange(IndexError):
    """A rank, position or occurrence index outside its valid interval."""


class InvalidConfig(ValueError):
    """A structurally impossible configuration (e.g. sub-block larger than block)."""


class Space(Enum):
    ORIGINAL = "original"
    RANK = "rank"


@dataclass(frozen=True)
class Point:
    """A point on the rank grid; both coordinates in [1..n]."""

    x: int
    y: int

    def astuple(self) -> tuple[int, int]:
        return (self.x, self.y)


class PointSet:
    """n rank-space points sorted by x; x and y multisets are each exactly {1..n}.

    Stored column-wise: ``ys_by_x[i]`` is the y rank of the point with x rank
    i+1, and ``xs_by_y`` is the inverse permutation.
    """

    __slots__ = ("n", "ys_by_x", "xs_by_y")

    def __init__(self, ys_by_x):
        ys = np.ascontiguousarray(ys_by_x, dtype=np.int32)
        n = len(ys)
        if n > 0:
            seen = np.zeros(n, dtype=bool)
            if ys.min(initial=1) < 1 or ys.max(initial=n) > n:
                raise ValueError("y ranks must lie in [1..n]")
            seen[ys - 1] = True
            if not seen.all():
                raise ValueError("y ranks must form a permutation of [1..n]")
        self.n = n
        self.ys_by_x = ys
        xs = np.empty(n, dtype=np.int32)
        xs[ys - 1] = np.arange(1, n + 1, dtype=np.int32)
        self.xs_by_y = xs

    def point_at_x(self, x: int) -> Point:
        if not 1 <= x <= self.n:
            raise OutOfRange(f"x rank {x} outside [1..{self.n}]")
        return Point(x, int(self.ys_by_x[x - 1]))

    def point_at_y(self, y: int) -> Point:
        if not 1 <= y <= self.n:
            raise OutOfRange(f"y rank {y} outside [1..{self.n}]")
        return Point(int(self.xs_by_y[y - 1]), y)

    def points(self) -> list[Point]:
        return [Point(i + 1, int(y)) for i, y in enumerate(self.ys_by_x)]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and np.array_equal(self.ys_by_x, other.ys_by_x)


class RankSpaceMap:
    """Order-preserving bijection between original int64 coordinates and ranks."""

    __slots__ = ("xs_sorted", "ys_sorted")

    def __init__(self, xs_sorted, ys_sorted):
        self.xs_sorted = np.ascontiguousarray(xs_sorted, dtype=np.int64)
        self.ys_sorted = np.ascontiguousarray(ys_sorted, dtype=np.int64)
        if len(self.xs_sorted) != len(self.ys_sorted):
            raise ValueError("coordinate arrays must have equal length")
        for arr, axis in ((self.xs_sorted, "x"), (self.ys_sorted, "y")):
            if len(arr) > 1 and not (np.diff(arr) > 0).all():
                raise ValueError(f"{axis} values must be strictly increasing")

    @property
    def n(self) -> int:
        return len(self.xs_sorted)


@dataclass(frozen=True)
class Rect:
    """Query rectangle [a..b] x [c..d]; `space` says which coordinate system."""

    a: int
    b: int
    c: int
    d: int
    space: Space = Space.RANK

    def validate_rank(self, n: int) -> None:
        if self.space is not Space.RANK:
            raise ValueError("expected a RANK-space rectangle")
        if not (1 <= self.a <= self.b <= n and 1 <= self.c <= self.d <= n):
            raise OutOfRange(f"rectangle {self} outside rank grid [1..{n}]^2")


#: QueryStats counter names, in the order used by the compiled engine's buffer.
STAT_FIELDS = (
    "emptiness_queries",
    "rmq_probes",
    "point_resolutions",
    "descent_rank_ops",
    "block_queries",
    "subblock_scans",
    "predecessor_probes",
    "successor_calls",
)


class QueryStats:
    """Monotone probe counters for one query scope; reset is explicit."""

    __slots__ = STAT_FIELDS

    def __init__(self):
        self.reset()

    def reset(self) -> None:
        for name in STAT_FIELDS:
            setattr(self, name, 0)

    def snapshot(self) -> tuple[int, ...]:
        return tuple(getattr(self, name) for name in STAT_FIELDS)

    def add_array(self, buf) -> None:
        """Merge a compiled-engine counter buffer (int64[8]) into this object."""
        for i, name in enumerate(STAT_FIELDS):
            setattr(self, name, getattr(self, name) + int(buf[i]))

    def as_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in STAT_FIELDS}

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.as_dict().items())
        return f"QueryStats({inner})"


def reduce_to_rank(raw_points) -> tuple[PointSet, RankSpaceMap]:
    """Map original (x, y) int64 pairs to the rank-space permutation.

    Raises DuplicateCoordinate (with 1-based input line numbers) on any
    repeated x or repeated y.
    """
    pts = np.asarray(raw_points, dtype=np.int64).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        return PointSet(np.empty(0, dtype=np.int32)), RankSpaceMap([], [])
    for col, axis in ((0, "x"), (1, "y")):
        order = np.argsort(pts[:, col], kind="stable")
        vals = pts[order, col]
        dup = np.nonzero(vals[1:] == vals[:-1])[0]
        if len(dup):
            i = dup[0]
            first, second = sorted((int(order[i]) + 1, int(order[i + 1]) + 1))
            raise DuplicateCoordinate(axis, int(vals[i]), first, second)
    x_order = np.argsort(pts[:, 0])
    xs_sorted = pts[x_order, 0]
    ys_sorted = np.sort(pts[:, 1])
    y_rank = np.empty(n, dtype=np.int32)
    y_rank[np.argsort(pts[:, 1])] = np.arange(1, n + 1, dtype=np.int32)
    ys_by_x = y_rank[x_order]
    return PointSet(ys_by_x), RankSpaceMap(xs_sorted, ys_sorted)


def rect_to_rank(r: Rect, m: RankSpaceMap) -> Rect | None:
    """Tighten an ORIGINAL rectangle onto stored coordinates; None if it empties.

    a maps to the rank of the smallest stored x >= r.a, b to the rank of the
    largest stored x <= r.b (same for c, d on y); an inverted interval means
    no stored coordinate falls inside, i.e. an empty query.
    """
    if r.space is not Space.ORIGINAL:
        raise ValueError("rect_to_rank expects an ORIGINAL-space rectangle")
    if r.a > r.b or r.c > r.d:
        raise OutOfRange(f"degenerate rectangle bounds {r}")
    if m.n == 0:
        return None
    a = int(np.searchsorted(m.xs_sorted, r.a, side="left")) + 1
    b = int(np.searchsorted(m.xs_sorted, r.b, side="right"))
    c = int(np.searchsorted(m.ys_sorted, r.c, side="left")) + 1
    d = int(np.searchsorted(m.ys_sorted, r.d, side="right"))
    if a > b or c > d:
        return None
    return Rect(a, b, c, d, Space.RANK)


def restore_point(p: Point, m: RankSpaceMap) -> tuple[int, int]:
    """Inverse of reduce_to_rank on a single rank-space point."""
    if not (1 <= p.x <= m.n and 1 <= p.y <= m.n):
        raise OutOfRange(f"rank point {p} outside [1..{m.n}]")
    return (int(m.xs_sorted[p.x - 1]), int(m.ys_sorted[p.y - 1]))
