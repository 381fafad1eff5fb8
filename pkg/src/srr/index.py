"""Facade bundling the tree, RMQ bundle and block auxiliaries behind one object.

Queries accept RANK-space rectangles (the `*_rank` methods) or ORIGINAL-space
ones (mapped through the stored rank-space map first). Execution dispatches to
the compiled engine when the extension is importable; `SRR_ENGINE=py` or
`set_engine("py")` forces the pure-Python modules. Both paths produce
identical answers and identical probe counters.
"""

from __future__ import annotations

import numpy as np

from . import oracle, sorted_iter, successor, threesided
from .model import (
    Point,
    PointSet,
    QueryStats,
    RankSpaceMap,
    Rect,
    Space,
    rect_to_rank,
    reduce_to_rank,
    restore_point,
)
from .rmq import ceil_log2
from .successor import SuccessorConfig
from .threesided import build_bundle
from .wavetree import BallInheritanceConfig, build_tree

WORD_BITS = 64


class RangeSuccessorIndex:
    def __init__(
        self,
        ps: PointSet,
        rank_map: RankSpaceMap | None = None,
        ball: BallInheritanceConfig | None = None,
        successor_cfg: SuccessorConfig | None = None,
        engine: str = "auto",
    ):
        self.ps = ps
        self.rank_map = rank_map
        self.ball = ball or BallInheritanceConfig()
        self.successor_cfg = successor_cfg or SuccessorConfig()
        self.tree = build_tree(ps, self.ball)
        self.bundle = build_bundle(self.tree)
        self.aux = successor.build_aux(self.tree, self.bundle, self.successor_cfg)
        self._engine = None
        self._engine_name = "py"
        self.set_engine(engine)

    # ---- construction ----------------------------------------------------

    @classmethod
    def from_raw_points(cls, raw_points, **kw) -> "RangeSuccessorIndex":
        ps, rank_map = reduce_to_rank(raw_points)
        return cls(ps, rank_map, **kw)

    @classmethod
    def from_permutation(cls, ys_by_x, **kw) -> "RangeSuccessorIndex":
        """Build directly over rank-space points (identity rank map)."""
        ps = PointSet(np.asarray(ys_by_x, dtype=np.int32))
        ident = np.arange(1, ps.n + 1, dtype=np.int64)
        return cls(ps, RankSpaceMap(ident, ident.copy()), **kw)

    @property
    def n(self) -> int:
        return self.ps.n

    # ---- engine selection --------------------------------------------------

    def set_engine(self, which: str) -> None:
        from . import engine as engine_mod

        self._engine_name, self._engine = engine_mod.select(self, which)

    @property
    def engine_name(self) -> str:
        return self._engine_name

    # ---- coordinate handling ----------------------------------------------

    def to_rank_rect(self, rect: Rect | None) -> Rect | None:
        if rect is None:
            return None
        if rect.space is Space.RANK:
            rect.validate_rank(self.n)
            return rect
        if self.rank_map is None:
            raise ValueError("index has no rank-space map for ORIGINAL rectangles")
        return rect_to_rank(rect, self.rank_map)

    def restore(self, p: Point | None):
        if p is None:
            return None
        if self.rank_map is None:
            return p.astuple()
        return restore_point(p, self.rank_map)

    # ---- rank-space queries -------------------------------------------------

    def leftmost_in_rect_rank(self, rect: Rect | None, stats: QueryStats | None = None):
        if rect is None or self.n == 0:
            return None
        stats = stats if stats is not None else QueryStats()
        if self._engine is not None:
            return self._engine.leftmost(rect, stats)
        return successor.leftmost_in_rect(self.tree, self.bundle, self.aux, rect, stats)

    def lowest_in_rect_rank(self, rect: Rect | None, stats: QueryStats | None = None):
        if rect is None or self.n == 0:
            return None
        stats = stats if stats is not None else QueryStats()
        if self._engine is not None:
            return self._engine.lowest(rect, stats)
        return successor.lowest_in_rect_baseline(self.tree, self.bundle, rect, stats)

    def report_rect_rank(
        self, rect: Rect | None, limit=None, stats: QueryStats | None = None
    ) -> list[Point]:
        if rect is None or self.n == 0:
            return []
        stats = stats if stats is not None else QueryStats()
        if self._engine is not None:
            return self._engine.report(rect, limit, stats)
        out: list[Point] = []
        threesided.report_rect(self.tree, self.bundle, rect, out.append, limit, stats)
        return out

    def collect_sorted_rank(
        self, rect: Rect | None, k=None, stats: QueryStats | None = None
    ) -> list[Point]:
        if rect is None or self.n == 0:
            return []
        if self._engine is not None:
            stats = stats if stats is not None else QueryStats()
            return self._engine.collect_sorted(rect, k, stats)
        cur = sorted_iter.open_sorted(self, rect)
        if stats is not None:
            cur.stats = stats
        out: list[Point] = []
        while k is None or len(out) < k:
            p = sorted_iter.next_point(cur)
            if p is None:
                break
            out.append(p)
        return out

    def open_cursor(self, rect: Rect | None) -> sorted_iter.Cursor:
        return sorted_iter.open_sorted(self, rect)

    # ---- original-space conveniences (CLI surface) ---------------------------

    def leftmost(self, rect: Rect):
        return self.restore(self.leftmost_in_rect_rank(self.to_rank_rect(rect)))

    def lowest(self, rect: Rect):
        return self.restore(self.lowest_in_rect_rank(self.to_rank_rect(rect)))

    def report(self, rect: Rect, limit=None):
        pts = self.report_rect_rank(self.to_rank_rect(rect), limit)
        return [self.restore(p) for p in pts]

    def report_sorted(self, rect: Rect, k=None):
        pts = self.collect_sorted_rank(self.to_rank_rect(rect), k)
        return [self.restore(p) for p in pts]

    # ---- oracles over the same point set -------------------------------------

    def oracle_leftmost(self, rect: Rect):
        return self.restore(oracle.oracle_leftmost(self.ps, self.to_rank_rect(rect)))

    def oracle_lowest(self, rect: Rect):
        return self.restore(oracle.oracle_lowest(self.ps, self.to_rank_rect(rect)))

    def oracle_report_sorted(self, rect: Rect, k=None):
        pts = oracle.oracle_report_sorted(self.ps, self.to_rank_rect(rect), k)
        return [self.restore(p) for p in pts]

    # ---- space accounting -----------------------------------------------------

    def space_report(self) -> dict:
        comp = self.tree.space_components()
        comp["rmq_bundle"] = self.bundle.size_bits()
        comp.update(self.aux.space_components())
        if self.rank_map is not None:
            comp["rank_map"] = (
                self.rank_map.xs_sorted.nbytes + self.rank_map.ys_sorted.nbytes
            ) * 8
        total_bits = sum(comp.values())
        n_hat = self.tree.n_hat
        lglg = max(1, ceil_log2(max(2, ceil_log2(max(2, n_hat)))))
        denom = max(1, self.n) * lglg * WORD_BITS
        return {
            "n": self.n,
            "n_hat": n_hat,
            "components_bits": comp,
            "total_bits": total_bits,
            "total_words": (total_bits + WORD_BITS - 1) // WORD_BITS,
            "ratio_to_n_lglg_words": total_bits / denom,
            "block_size": self.aux.b,
            "sub_block_size": self.aux.s,
            "subblock_mode": self.aux.subblock_mode,
            "block_pred_mode": self.successor_cfg.block_pred_mode,
            "ball_mode": self.ball.describe(),
            "engine": self._engine_name,
        }

    # ---- serialization ---------------------------------------------------------

    def save(self, path) -> None:
        from . import storage

        storage.save_index(self, path)

    @classmethod
    def load(cls, path, engine: str = "auto") -> "RangeSuccessorIndex":
        from . import storage

        return storage.load_index(path, engine=engine)
