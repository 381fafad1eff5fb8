"""Dyadic range tree over y stored as per-level bit vectors.

Level 0 is the root (points in x order); at each internal level one bit per
point records the child it descends to (0 = left). Nodes of a level are laid
out left-to-right in one concatenated sequence, so a node is addressed by its
(level, index) pair plus an offset table. The ball-inheritance trade-off is a
strategy knob: WALK stores nothing and descends to the leaves, SKIP(t)
materializes coordinate arrays every t levels, FULL materializes every level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitvec import BitVector
from .model import OutOfRange, Point, PointSet, QueryStats
from .rmq import ceil_log2

TO_LEFT_CHILD = "TO_LEFT_CHILD"
TO_RIGHT_CHILD = "TO_RIGHT_CHILD"
FROM_LEFT_CHILD = "FROM_LEFT_CHILD"
FROM_RIGHT_CHILD = "FROM_RIGHT_CHILD"


@dataclass(frozen=True)
class NodeRef:
    """Tree node addressed by level (0 = root) and position within the level."""

    level: int
    index: int


@dataclass(frozen=True)
class BallInheritanceConfig:
    """Point-resolution strategy: WALK, SKIP(stride t >= 1) or FULL (= SKIP(1))."""

    mode: str = "skip"
    stride: int | None = None

    def __post_init__(self):
        if self.mode not in ("walk", "skip", "full"):
            raise ValueError(f"unknown ball-inheritance mode {self.mode!r}")
        if self.stride is not None and self.stride < 1:
            raise ValueError("stride must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "BallInheritanceConfig":
        t = text.strip().lower()
        if t == "walk":
            return cls("walk")
        if t == "full":
            return cls("full")
        if t == "skip":
            return cls("skip")
        if t.startswith("skip:"):
            return cls("skip", int(t.split(":", 1)[1]))
        raise ValueError(f"cannot parse ball-inheritance config {text!r}")

    def effective_stride(self, levels: int) -> int | None:
        """Materialization stride for a tree of the given depth; None = WALK."""
        if self.mode == "walk":
            return None
        if self.mode == "full":
            return 1
        if self.stride is not None:
            return self.stride
        if levels <= 1:
            return 1
        return max(1, math.ceil(levels / max(1, ceil_log2(levels))))

    def describe(self) -> str:
        if self.mode == "skip":
            return f"skip:{self.stride}" if self.stride else "skip"
        return self.mode


class RangeTree:
    """The levelled wavelet tree plus ball-inheritance material."""

    def __init__(self, ps: PointSet, strategy: BallInheritanceConfig):
        self.n = ps.n
        self.n_hat = 1 if ps.n <= 1 else 1 << ceil_log2(ps.n)
        self.L = ceil_log2(self.n_hat)
        self.strategy = strategy
        self.ys_by_x = ps.ys_by_x
        self.xs_by_y = ps.xs_by_y
        n, L = self.n, self.L
        # arrangement of y values per level; kept as RMQ comparison keys
        self.level_y = np.empty((L + 1, n), dtype=np.int32)
        self.levels: list[BitVector] = []
        cur = ps.ys_by_x.copy()
        self.level_y[0] = cur
        for lev in range(L):
            shift = L - 1 - lev
            bits = ((cur - 1) >> shift & 1).astype(np.uint8)
            self.levels.append(BitVector(bits))
            order = np.argsort((cur - 1) >> shift, kind="stable")
            cur = cur[order]
            self.level_y[lev + 1] = cur
        self.node_off = []
        for lev in range(L + 1):
            ids = (self.level_y[lev] - 1) >> (L - lev)
            counts = np.bincount(ids, minlength=1 << lev)
            off = np.zeros((1 << lev) + 1, dtype=np.int64)
            np.cumsum(counts, out=off[1:])
            self.node_off.append(off)
        stride = strategy.effective_stride(L)
        self.mat: dict[int, np.ndarray] = {}
        if stride is not None:
            for lev in range(stride, L, stride):
                self.mat[lev] = self.xs_by_y[self.level_y[lev] - 1].astype(np.int32)

    # ---- node geometry --------------------------------------------------

    @property
    def root(self) -> NodeRef:
        return NodeRef(0, 0)

    def children(self, v: NodeRef) -> tuple[NodeRef, NodeRef]:
        if v.level >= self.L:
            raise OutOfRange("leaf nodes have no children")
        return NodeRef(v.level + 1, 2 * v.index), NodeRef(v.level + 1, 2 * v.index + 1)

    def node_range(self, v: NodeRef) -> tuple[int, int]:
        """Dyadic y interval [lo..hi] associated with the node."""
        width = self.n_hat >> v.level
        lo = v.index * width + 1
        return lo, lo + width - 1

    def node_offset(self, v: NodeRef) -> int:
        return int(self.node_off[v.level][v.index])

    def node_size(self, v: NodeRef) -> int:
        off = self.node_off[v.level]
        return int(off[v.index + 1] - off[v.index])

    def _check_node(self, v: NodeRef) -> None:
        if not (0 <= v.level <= self.L and 0 <= v.index < (1 << v.level)):
            raise OutOfRange(f"node {v} outside tree of depth {self.L}")

    # ---- operations ------------------------------------------------------

    def lca_node(self, c: int, d: int) -> NodeRef:
        """Deepest node whose dyadic range contains both y ranks c and d."""
        if not 1 <= c <= d <= self.n:
            raise OutOfRange(f"y range [{c}..{d}] outside [1..{self.n}]")
        diff = (c - 1) ^ (d - 1)
        if diff == 0:
            return NodeRef(self.L, c - 1)
        h = diff.bit_length()
        return NodeRef(self.L - h, (c - 1) >> h)

    def noderange(self, v: NodeRef, a: int, b: int, stats: QueryStats):
        """Positions in S(v) of points with x in [a..b]; None if empty.

        Walks root -> v, translating the interval with one rank pair per edge.
        """
        self._check_node(v)
        if not 1 <= a <= b <= self.n:
            raise OutOfRange(f"x range [{a}..{b}] outside [1..{self.n}]")
        lo, hi = a, b
        for k in range(v.level):
            bit = (v.index >> (v.level - 1 - k)) & 1
            off = int(self.node_off[k][v.index >> (v.level - k)])
            bv = self.levels[k]
            stats.descent_rank_ops += 1
            base = bv.rank(bit, off)
            lo = bv.rank(bit, off + lo - 1) - base + 1
            hi = bv.rank(bit, off + hi) - base
            if lo > hi:
                return None
        return (lo, hi)

    def resolve_point(self, v: NodeRef, i: int, stats: QueryStats) -> Point:
        """Coordinates of S(v)[i] via the configured ball-inheritance walk."""
        self._check_node(v)
        if not 1 <= i <= self.node_size(v):
            raise OutOfRange(f"position {i} outside S{(v.level, v.index)}")
        stats.point_resolutions += 1
        lev, idx, pos = v.level, v.index, i
        while True:
            if lev == self.L:
                y = idx + 1
                return Point(int(self.xs_by_y[y - 1]), y)
            if lev == 0:
                return Point(pos, int(self.ys_by_x[pos - 1]))
            arr = self.mat.get(lev)
            if arr is not None:
                x = int(arr[self.node_off[lev][idx] + pos - 1])
                return Point(x, int(self.ys_by_x[x - 1]))
            off = int(self.node_off[lev][idx])
            bv = self.levels[lev]
            bit = bv.get(off + pos - 1)
            stats.descent_rank_ops += 1
            pos = bv.rank(bit, off + pos) - bv.rank(bit, off)
            idx = 2 * idx + bit
            lev += 1

    def translate_edge(self, v: NodeRef, i: int, direction: str):
        """Map a position across one parent/child edge (see module docstring)."""
        self._check_node(v)
        if v.level >= self.L:
            raise OutOfRange("leaf nodes have no child edges")
        off = self.node_offset(v)
        size = self.node_size(v)
        bv = self.levels[v.level]
        if direction in (TO_LEFT_CHILD, TO_RIGHT_CHILD):
            if not 1 <= i <= size:
                raise OutOfRange(f"position {i} outside S(v) of size {size}")
            bit = 1 if direction == TO_RIGHT_CHILD else 0
            if bv.get(off + i - 1) != bit:
                return None
            return bv.rank(bit, off + i) - bv.rank(bit, off)
        if direction in (FROM_LEFT_CHILD, FROM_RIGHT_CHILD):
            bit = 1 if direction == FROM_RIGHT_CHILD else 0
            child = NodeRef(v.level + 1, 2 * v.index + bit)
            if not 1 <= i <= self.node_size(child):
                raise OutOfRange(f"position {i} outside child of size {self.node_size(child)}")
            return bv.select(bit, bv.rank(bit, off) + i) - off
        raise ValueError(f"unknown edge direction {direction!r}")

    # ---- reporting -------------------------------------------------------

    def space_components(self) -> dict[str, int]:
        bits = {"bitvector_raw": 0, "bitvector_directory": 0}
        for bv in self.levels:
            bits["bitvector_raw"] += bv.raw_bits()
            bits["bitvector_directory"] += bv.directory_bits()
        bits["node_offsets"] = sum(off.nbytes for off in self.node_off) * 8
        bits["materialized_coords"] = sum(a.nbytes for a in self.mat.values()) * 8
        bits["point_tables"] = (self.ys_by_x.nbytes + self.xs_by_y.nbytes) * 8
        bits["rmq_keys"] = self.level_y.nbytes * 8
        return bits


def build_tree(ps: PointSet, cfg: BallInheritanceConfig | None = None) -> RangeTree:
    return RangeTree(ps, cfg or BallInheritanceConfig())


def lca_node(t: RangeTree, c: int, d: int) -> NodeRef:
    return t.lca_node(c, d)


def noderange(t: RangeTree, v: NodeRef, a: int, b: int, stats: QueryStats):
    return t.noderange(v, a, b, stats)


def resolve_point(t: RangeTree, v: NodeRef, i: int, stats: QueryStats) -> Point:
    return t.resolve_point(v, i, stats)


def translate_edge(t: RangeTree, v: NodeRef, i: int, direction: str):
    return t.translate_edge(v, i, direction)
