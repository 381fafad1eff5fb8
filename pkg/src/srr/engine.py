"""Engine selection: compiled extension when available, pure Python otherwise.

The compiled engine (`srr._engine`) re-implements the query kernels over the
same flat arrays the Python modules use; answers and probe counters are
identical by construction (and asserted so in the test suite). Selection
order: explicit argument, then the SRR_ENGINE environment variable
("py" | "compiled" | "auto"), then auto.
"""

from __future__ import annotations

import os

import numpy as np

from .model import STAT_FIELDS, OutOfRange, Point, QueryStats, Rect

try:
    from . import _engine as _compiled
except ImportError:  # extension not built; pure Python only
    _compiled = None


def compiled_available() -> bool:
    return _compiled is not None


def select(index, which: str = "auto"):
    """Resolve an engine choice to (name, engine-or-None)."""
    if which == "auto":
        which = os.environ.get("SRR_ENGINE", "auto")
    if which in ("py", "python"):
        return "py", None
    if which in ("auto", "compiled", "c"):
        if _compiled is not None:
            return "compiled", CompiledEngine(index)
        if which in ("compiled", "c"):
            raise RuntimeError(
                "compiled engine requested but srr._engine is not built"
            )
        return "py", None
    raise ValueError(f"unknown engine {which!r}")


class CompiledEngine:
    """Thin wrapper: flattens the index once, then dispatches query calls."""

    def __init__(self, index):
        self.core = _compiled.Engine(*flatten_index(index))
        self.n = index.n
        self._scratch = np.zeros(len(STAT_FIELDS), dtype=np.int64)

    def _run(self, fn, rect: Rect, stats: QueryStats, *args):
        rect.validate_rank(self.n)
        buf = self._scratch
        buf[:] = 0
        out = fn(rect.a, rect.b, rect.c, rect.d, *args, buf)
        stats.add_array(buf)
        return out

    def leftmost(self, rect: Rect, stats: QueryStats):
        xy = self._run(self.core.leftmost, rect, stats)
        return None if xy < 0 else Point(xy >> 32, xy & 0xFFFFFFFF)

    def lowest(self, rect: Rect, stats: QueryStats):
        xy = self._run(self.core.lowest, rect, stats)
        return None if xy < 0 else Point(xy >> 32, xy & 0xFFFFFFFF)

    def report(self, rect: Rect, limit, stats: QueryStats):
        cap = self.n if limit is None else min(limit, self.n)
        if cap <= 0:
            return []
        out = np.empty((cap, 2), dtype=np.int32)
        cnt = self._run(self.core.report, rect, stats, -1 if limit is None else limit, out)
        return [Point(int(x), int(y)) for x, y in out[:cnt]]

    def collect_sorted(self, rect: Rect, k, stats: QueryStats):
        cap = self.n if k is None else min(k, self.n)
        if cap < 0:
            cap = 0
        out = np.empty((max(cap, 1), 2), dtype=np.int32)
        cnt = self._run(
            self.core.collect_sorted, rect, stats, -1 if k is None else k, out
        )
        return [Point(int(x), int(y)) for x, y in out[:cnt]]

    # bulk helpers used by the acceptance suite and benchmarks
    def verify_all_rects(self, checks: int, sorted_cap: int = -1) -> dict:
        return self.core.verify_all_rects(checks, sorted_cap)

    def verify_rects(self, rects, checks: int, sorted_cap: int = -1) -> dict:
        r = np.ascontiguousarray(rects, dtype=np.int64).reshape(-1, 4)
        return self.core.verify_rects(r, checks, sorted_cap)

    def run_rects(self, mode: str, rects: np.ndarray, limit=None):
        """Answer many rectangles; returns (answers int64[m], counter maxima)."""
        r = np.ascontiguousarray(rects, dtype=np.int64)
        out = np.empty(len(r), dtype=np.int64)
        mx = np.zeros(len(STAT_FIELDS), dtype=np.int64)
        tot = np.zeros(len(STAT_FIELDS), dtype=np.int64)
        mode_id = {"leftmost": 0, "lowest": 1, "report": 2, "sorted": 3}[mode]
        self.core.run_rects(mode_id, r, -1 if limit is None else limit, out, mx, tot)
        return out, mx, tot


def flatten_index(index):
    """Assemble the flat array tuple consumed by the compiled Engine."""
    tree, bundle, aux = index.tree, index.bundle, index.aux
    n, n_hat, L = tree.n, tree.n_hat, tree.L
    w_per = max(1, (n + 63) // 64)
    s_per = len(tree.levels[0].sup) if L else 2
    words = np.zeros((max(L, 1), w_per), dtype=np.uint64)
    sup = np.zeros((max(L, 1), s_per), dtype=np.int64)
    blk = np.zeros((max(L, 1), w_per), dtype=np.uint16)
    zsup = np.zeros((max(L, 1), s_per), dtype=np.int64)
    sel1 = []
    sel0 = []
    sel1_off = np.zeros(L + 1, dtype=np.int64)
    sel0_off = np.zeros(L + 1, dtype=np.int64)
    for lev, bv in enumerate(tree.levels):
        words[lev, : len(bv.words)] = bv.words
        sup[lev, : len(bv.sup)] = bv.sup
        blk[lev, : len(bv.blk)] = bv.blk
        zsup[lev, : len(bv.zsup)] = bv.zsup
        sel1.append(bv.sel1)
        sel0.append(bv.sel0)
        sel1_off[lev + 1] = sel1_off[lev] + len(bv.sel1)
        sel0_off[lev + 1] = sel0_off[lev] + len(bv.sel0)
    sel1_flat = np.concatenate(sel1).astype(np.int32) if sel1 else np.zeros(1, np.int32)
    sel0_flat = np.concatenate(sel0).astype(np.int32) if sel0 else np.zeros(1, np.int32)
    noff = np.concatenate(tree.node_off)
    noff_base = np.zeros(L + 2, dtype=np.int64)
    np.cumsum([len(o) for o in tree.node_off], out=noff_base[1:])
    mat_row = np.full(L + 1, -1, dtype=np.int32)
    mats = []
    for lev in sorted(tree.mat):
        mat_row[lev] = len(mats)
        mats.append(tree.mat[lev])
    mat = np.vstack(mats) if mats else np.zeros((0, n), dtype=np.int32)
    bp = bundle.packed
    ap = aux.packed
    nbb = np.concatenate(aux.nblk_base)
    nbb_base = np.zeros(L + 2, dtype=np.int64)
    np.cumsum([len(a) for a in aux.nblk_base], out=nbb_base[1:])
    bstart = _cat64(aux.bstart)
    blen = _cat32(aux.blen)
    lvl_blk = np.zeros(L + 2, dtype=np.int64)
    np.cumsum([len(a) for a in aux.bstart], out=lvl_blk[1:])
    dmin = _cat32(aux.d_min)
    dmax = _cat32(aux.d_max)
    sub_base = np.concatenate(aux.sub_base)
    sub_base_off = np.zeros(L + 2, dtype=np.int64)
    np.cumsum([len(a) for a in aux.sub_base], out=sub_base_off[1:])
    emin = _cat32(aux.e_min)
    emax = _cat32(aux.e_max)
    lvl_sub = np.zeros(L + 2, dtype=np.int64)
    np.cumsum([len(a) for a in aux.e_min], out=lvl_sub[1:])
    if aux.tables is not None:
        tbl_le, tbl_ge = aux.tables.le, aux.tables.ge
        tbl_dims = np.asarray(
            [aux.tables.w, aux.tables.tw, aux.tables.rw, 1], dtype=np.int64
        )
        sub_content = _cat64(aux.sub_content)
    else:
        tbl_le = tbl_ge = np.zeros(1, dtype=np.uint8)
        tbl_dims = np.zeros(4, dtype=np.int64)
        sub_content = np.zeros(1, dtype=np.int64)
    stored_y = (
        aux.stored_y
        if aux.stored_y is not None
        else np.zeros((0, max(n, 1)), dtype=np.int32)
    )
    config = np.asarray(
        [
            n,
            n_hat,
            L,
            aux.b,
            aux.s,
            1 if aux.stored_y is not None else 0,
            1 if aux.tables is not None else 0,
            w_per,
            s_per,
        ],
        dtype=np.int64,
    )
    yrank = aux.yrank if n else np.zeros((L + 1, 1), dtype=np.int32)
    rpos = aux.rpos if n else np.zeros((L + 1, 1), dtype=np.int32)
    if stored_y.shape[1] == 0:
        stored_y = np.zeros((stored_y.shape[0], 1), dtype=np.int32)
    return (
        config,
        tree.ys_by_x if n else np.zeros(1, np.int32),
        tree.xs_by_y if n else np.zeros(1, np.int32),
        words,
        sup,
        blk,
        zsup,
        sel1_flat,
        sel1_off,
        sel0_flat,
        sel0_off,
        noff,
        noff_base,
        mat_row,
        mat if mat.size else np.zeros((mat.shape[0] or 1, max(n, 1)), np.int32),
        bp.keys if bp.keys.size else np.zeros(1, np.int32),
        bp.key_base,
        bp.blk_base,
        bp.tbl_base,
        bp.tbl_k,
        bp.blk_pos if bp.blk_pos.size else np.zeros(1, np.int64),
        bp.tbl if bp.tbl.size else np.zeros(1, np.int32),
        ap.keys if ap.keys.size else np.zeros(1, np.int32),
        ap.key_base,
        ap.blk_base,
        ap.tbl_base,
        ap.tbl_k,
        ap.blk_pos if ap.blk_pos.size else np.zeros(1, np.int64),
        ap.tbl if ap.tbl.size else np.zeros(1, np.int32),
        yrank,
        rpos,
        nbb,
        nbb_base,
        bstart,
        blen,
        lvl_blk,
        dmin,
        dmax,
        sub_base,
        sub_base_off,
        emin,
        emax,
        lvl_sub,
        stored_y,
        sub_content,
        tbl_le,
        tbl_ge,
        tbl_dims,
    )


def _cat32(arrays):
    arrays = [np.asarray(a, dtype=np.int32) for a in arrays]
    out = np.concatenate(arrays) if arrays else np.zeros(0, np.int32)
    return out if out.size else np.zeros(1, np.int32)


def _cat64(arrays):
    arrays = [np.asarray(a, dtype=np.int64) for a in arrays]
    out = np.concatenate(arrays) if arrays else np.zeros(0, np.int64)
    return out if out.size else np.zeros(1, np.int64)
