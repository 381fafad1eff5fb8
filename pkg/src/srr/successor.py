"""Range successor queries: block/sub-block fast path and the path-binary-search baseline.

Fast path per node: the node's x-ordered points are cut into blocks of size B
(default ceil(lg^3 n_hat)) and sub-blocks of size s (default ceil(lg^(1/2)
n_hat), min 2). Per block we keep the y extremes (D summaries) and the local
y-ranks of its points; per sub-block the extreme local ranks (E summaries).
A 3-sided query touches at most the two boundary blocks plus one middle block
found through a leftmost-below-threshold descent on D; inside a block the
global threshold is translated to a local rank by predecessor search, and the
same boundary/middle scheme runs over sub-blocks with E.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import InvalidConfig, OutOfRange, Point, QueryStats, Rect
from .rmq import GE, LE, PackedArgopt, ceil_log2, leftmost_beyond_generic
from .threesided import ABOVE, BELOW, NodeRmqBundle, emptiness, report_halfplane
from .wavetree import FROM_LEFT_CHILD, FROM_RIGHT_CHILD, NodeRef, RangeTree

TABLE_KEY_WIDTH_CAP = 22


@dataclass(frozen=True)
class SuccessorConfig:
    """Block machinery knobs; None sizes mean the n_hat-derived defaults."""

    block_size: int | None = None
    sub_block_size: int | None = None
    subblock_mode: str = "scan"  # "scan" | "table"
    block_pred_mode: str = "probe"  # "probe" | "store_y"
    epsilon: float = 0.5

    def __post_init__(self):
        if self.subblock_mode not in ("scan", "table"):
            raise InvalidConfig(f"unknown subblock_mode {self.subblock_mode!r}")
        if self.block_pred_mode not in ("probe", "store_y"):
            raise InvalidConfig(f"unknown block_pred_mode {self.block_pred_mode!r}")
        if not 0 < self.epsilon < 1:
            raise InvalidConfig("epsilon must be in (0, 1)")

    def resolve_sizes(self, n_hat: int) -> tuple[int, int]:
        lg = math.log2(n_hat) if n_hat > 1 else 0.0
        b = self.block_size if self.block_size is not None else max(1, math.ceil(lg**3))
        if self.sub_block_size is not None:
            s = self.sub_block_size
        else:
            s = min(b, max(2, math.ceil(lg**self.epsilon))) if b > 1 else 1
        if b < 1 or s < 1:
            raise InvalidConfig(f"block sizes must be positive (B={b}, s={s})")
        if s > b:
            raise InvalidConfig(f"sub-block size {s} exceeds block size {b}")
        return b, s


class SubblockTables:
    """Global leftmost-qualifying lookup, keyed by packed sub-block content.

    Key layout (little end first): s fields of w = ceil(lg B) bits holding
    local-rank-1 per slot, then the threshold rank (ceil(lg(B+1)) bits), then
    the 1-based query range lo-1 and hi-1 (ceil(lg s) bits each). Value: 0 for
    no hit, else the 1-based slot of the leftmost qualifying entry.
    """

    def __init__(self, b: int, s: int):
        self.b, self.s = b, s
        self.w = ceil_log2(b)
        self.tw = ceil_log2(b + 1)
        self.rw = ceil_log2(s)
        self.width = s * self.w + self.tw + 2 * self.rw
        keys = np.arange(1 << self.width, dtype=np.int64)
        ranks = np.empty((s, len(keys)), dtype=np.int64)
        for slot in range(s):
            ranks[slot] = (keys >> (slot * self.w)) & ((1 << self.w) - 1)
        thr = (keys >> (s * self.w)) & ((1 << self.tw) - 1)
        lo = ((keys >> (s * self.w + self.tw)) & ((1 << self.rw) - 1)) + 1
        hi = ((keys >> (s * self.w + self.tw + self.rw)) & ((1 << self.rw) - 1)) + 1
        slots = np.arange(1, s + 1, dtype=np.int64)[:, None]
        in_range = (slots >= lo) & (slots <= hi)
        self.le = self._leftmost(in_range & (ranks <= thr - 1))
        self.ge = self._leftmost(in_range & (ranks >= thr - 1))

    @staticmethod
    def _leftmost(qual: np.ndarray) -> np.ndarray:
        any_hit = qual.any(axis=0)
        first = qual.argmax(axis=0) + 1
        return np.where(any_hit, first, 0).astype(np.uint8)

    def lookup(self, content: int, rt: int, lo: int, hi: int, sense: str) -> int:
        key = (
            content
            | rt << (self.s * self.w)
            | (lo - 1) << (self.s * self.w + self.tw)
            | (hi - 1) << (self.s * self.w + self.tw + self.rw)
        )
        tab = self.le if sense == LE else self.ge
        return int(tab[key])

    def size_bits(self) -> int:
        return (self.le.nbytes + self.ge.nbytes) * 8


class NodeAux:
    """Per-node block/sub-block auxiliary data, stored per level."""

    def __init__(self, tree: RangeTree, cfg: SuccessorConfig):
        self.cfg = cfg
        self.b, self.s = cfg.resolve_sizes(tree.n_hat)
        b, s = self.b, self.s
        self.tables: SubblockTables | None = None
        self.subblock_mode = cfg.subblock_mode
        if cfg.subblock_mode == "table":
            width = s * ceil_log2(b) + ceil_log2(b + 1) + 2 * ceil_log2(s)
            if width > TABLE_KEY_WIDTH_CAP:
                warnings.warn(
                    f"sub-block table key needs {width} bits (cap "
                    f"{TABLE_KEY_WIDTH_CAP}); falling back to scan mode",
                    stacklevel=3,
                )
                self.subblock_mode = "scan"
            else:
                self.tables = SubblockTables(b, s)
        L, n = tree.L, tree.n
        self.nblk_base: list[np.ndarray] = []
        self.bstart: list[np.ndarray] = []
        self.blen: list[np.ndarray] = []
        self.d_min: list[np.ndarray] = []
        self.d_max: list[np.ndarray] = []
        self.sub_base: list[np.ndarray] = []
        self.e_min: list[np.ndarray] = []
        self.e_max: list[np.ndarray] = []
        self.yrank = np.zeros((L + 1, n), dtype=np.int32)
        self.rpos = np.zeros((L + 1, n), dtype=np.int32)
        self.stored_y = (
            np.zeros((L + 1, n), dtype=np.int32)
            if cfg.block_pred_mode == "store_y"
            else None
        )
        self.sub_content: list[np.ndarray] | None = [] if self.tables else None
        for lev in range(L + 1):
            self._build_level(tree, lev)
        inst: list[np.ndarray] = []
        inst += [d for d in self.d_min]
        inst += [-d for d in self.d_max]
        inst += [e for e in self.e_min]
        inst += [-e for e in self.e_max]
        self.packed = PackedArgopt(inst)
        self.levels = L + 1

    def _build_level(self, tree: RangeTree, lev: int):
        b, s = self.b, self.s
        n, L = tree.n, tree.L
        seg = tree.node_off[lev]
        sizes = np.diff(seg)
        nb = (sizes + b - 1) // b
        base = np.zeros(len(nb) + 1, dtype=np.int64)
        np.cumsum(nb, out=base[1:])
        tb = int(base[-1])
        self.nblk_base.append(base)
        if tb == 0:
            self.bstart.append(np.empty(0, dtype=np.int64))
            self.blen.append(np.empty(0, dtype=np.int32))
            self.d_min.append(np.empty(0, dtype=np.int32))
            self.d_max.append(np.empty(0, dtype=np.int32))
            self.e_min.append(np.empty(0, dtype=np.int32))
            self.e_max.append(np.empty(0, dtype=np.int32))
            self.sub_base.append(np.zeros(1, dtype=np.int64))
            if self.sub_content is not None:
                self.sub_content.append(np.empty(0, dtype=np.int64))
            return
        blk_node = np.repeat(np.arange(len(nb)), nb)
        blk_g = np.arange(tb, dtype=np.int64) - base[blk_node]
        bstart = seg[blk_node] + blk_g * b
        blen = np.minimum(bstart + b, seg[blk_node + 1]) - bstart
        self.bstart.append(bstart)
        self.blen.append(blen.astype(np.int32))
        y = tree.level_y[lev]
        nid = (y - 1) >> (L - lev)
        pos = np.arange(n, dtype=np.int64)
        in_node = pos - seg[nid]
        bid = base[nid] + in_node // b
        bstart_of_pos = bstart[bid]
        order = np.lexsort((y, bid))
        counts = np.bincount(bid, minlength=tb)
        starts = np.zeros(tb + 1, dtype=np.int64)
        np.cumsum(counts, out=starts[1:])
        rank0 = pos - starts[bid[order]]  # 0-based y rank within block
        self.yrank[lev][order] = (rank0 + 1).astype(np.int32)
        slot = bstart_of_pos[order] + rank0
        self.rpos[lev][slot] = (order - bstart_of_pos[order] + 1).astype(np.int32)
        if self.stored_y is not None:
            self.stored_y[lev][slot] = y[order]
        self.d_min.append(np.minimum.reduceat(y, bstart).astype(np.int32))
        self.d_max.append(np.maximum.reduceat(y, bstart).astype(np.int32))
        ns_per = (blen + s - 1) // s
        sub_base = np.zeros(tb + 1, dtype=np.int64)
        np.cumsum(ns_per, out=sub_base[1:])
        tsub = int(sub_base[-1])
        sub_blk = np.repeat(np.arange(tb), ns_per)
        sub_h = np.arange(tsub, dtype=np.int64) - sub_base[sub_blk]
        sstart = bstart[sub_blk] + sub_h * s
        yr = self.yrank[lev]
        self.sub_base.append(sub_base)
        self.e_min.append(np.minimum.reduceat(yr, sstart).astype(np.int32))
        self.e_max.append(np.maximum.reduceat(yr, sstart).astype(np.int32))
        if self.sub_content is not None:
            send = np.minimum(sstart + s, bstart[sub_blk] + blen[sub_blk])
            content = np.zeros(tsub, dtype=np.int64)
            w = self.tables.w
            for slot_i in range(s):
                p = sstart + slot_i
                valid = p < send
                vals = np.where(valid, yr[np.minimum(p, n - 1)] - 1, 0)
                content |= vals.astype(np.int64) << (slot_i * w)
            self.sub_content.append(content)

    # ---- addressing helpers ---------------------------------------------

    def block_count(self, v: NodeRef) -> int:
        base = self.nblk_base[v.level]
        return int(base[v.index + 1] - base[v.index])

    def block_id(self, v: NodeRef, g: int) -> int:
        base = self.nblk_base[v.level]
        gb = int(base[v.index]) + g - 1
        if not 0 <= gb < int(base[v.index + 1]):
            raise OutOfRange(f"block {g} outside node with {self.block_count(v)} blocks")
        return gb

    def d_instance(self, lev: int, sense: str) -> int:
        return lev if sense == LE else self.levels + lev

    def e_instance(self, lev: int, sense: str) -> int:
        return 2 * self.levels + lev if sense == LE else 3 * self.levels + lev

    def space_components(self) -> dict[str, int]:
        bits = {
            "aux_local_ranks": int(self.yrank.nbytes + self.rpos.nbytes) * 8,
            "aux_block_bases": sum(a.nbytes for a in self.nblk_base) * 8
            + sum(a.nbytes for a in self.bstart) * 8
            + sum(a.nbytes for a in self.blen) * 8
            + sum(a.nbytes for a in self.sub_base) * 8,
            "aux_block_summaries": sum(a.nbytes for a in self.d_min) * 8
            + sum(a.nbytes for a in self.d_max) * 8
            + sum(a.nbytes for a in self.e_min) * 8
            + sum(a.nbytes for a in self.e_max) * 8,
            "aux_argopt_tables": self.packed.size_bits(),
        }
        if self.stored_y is not None:
            bits["aux_stored_y"] = self.stored_y.nbytes * 8
        if self.tables is not None:
            bits["aux_lookup_tables"] = self.tables.size_bits() + sum(
                a.nbytes for a in self.sub_content
            ) * 8
        return bits


def build_aux(tree: RangeTree, bundle: NodeRmqBundle | None, cfg: SuccessorConfig) -> NodeAux:
    """bundle is accepted for signature parity; the build needs only the tree."""
    return NodeAux(tree, cfg)


def pred_rank_in_block(t, aux, v, g, d, stats) -> int:
    """Count of points in block g of S(v) with y <= d (the local threshold d')."""
    gb = aux.block_id(v, g)
    lev = v.level
    blen = int(aux.blen[lev][gb])
    slot_base = int(aux.bstart[lev][gb])
    local_base = (g - 1) * aux.b
    probe = aux.stored_y is None
    lo, hi = 0, blen
    while lo < hi:
        mid = (lo + hi + 1) // 2
        stats.predecessor_probes += 1
        if probe:
            p = int(aux.rpos[lev][slot_base + mid - 1])
            y = t.resolve_point(v, local_base + p, stats).y
        else:
            y = int(aux.stored_y[lev][slot_base + mid - 1])
        if y <= d:
            lo = mid
        else:
            hi = mid - 1
    return lo


def leftmost_in_block(t, aux, v, g, p, q, rank_threshold, sense, stats):
    """Leftmost local position in block range [p..q] whose local y-rank passes.

    sense LE keeps ranks <= rank_threshold, GE keeps ranks >= rank_threshold.
    Boundary sub-blocks are resolved by scan or table lookup; middle sub-blocks
    through a leftmost-qualifying descent on the E summaries.
    """
    gb = aux.block_id(v, g)
    lev = v.level
    blen = int(aux.blen[lev][gb])
    if not 1 <= p <= q <= blen:
        raise OutOfRange(f"range [{p}..{q}] outside block of length {blen}")
    s = aux.s
    slot_base = int(aux.bstart[lev][gb])
    yr = aux.yrank[lev]

    def resolve_sub(h, lo, hi):
        stats.subblock_scans += 1
        if aux.tables is not None:
            content = int(aux.sub_content[lev][int(aux.sub_base[lev][gb]) + h - 1])
            rel = aux.tables.lookup(
                content, rank_threshold, lo - (h - 1) * s, hi - (h - 1) * s, sense
            )
            return (h - 1) * s + rel if rel else None
        if sense == LE:
            for pos in range(lo, hi + 1):
                if yr[slot_base + pos - 1] <= rank_threshold:
                    return pos
        else:
            for pos in range(lo, hi + 1):
                if yr[slot_base + pos - 1] >= rank_threshold:
                    return pos
        return None

    sb_p = (p - 1) // s + 1
    sb_q = (q - 1) // s + 1
    if sb_p == sb_q:
        return resolve_sub(sb_p, p, q)
    r = resolve_sub(sb_p, p, sb_p * s)
    if r is not None:
        return r
    if sb_q - sb_p >= 2:
        sub0 = int(aux.sub_base[lev][gb])
        inst = aux.e_instance(lev, sense)
        arr = aux.e_min[lev] if sense == LE else aux.e_max[lev]
        hit = leftmost_beyond_generic(
            lambda lo, hi: aux.packed.query(inst, lo, hi),
            lambda sid: int(arr[sid]),
            sub0 + sb_p,
            sub0 + sb_q - 2,
            rank_threshold,
            sense,
            stats,
        )
        if hit is not None:
            h = hit - sub0 + 1
            r = resolve_sub(h, (h - 1) * s + 1, min(h * s, blen))
            assert r is not None, "E summary promised a qualifying sub-block"
            return r
    return resolve_sub(sb_q, (sb_q - 1) * s + 1, q)


def leftmost_halfplane_in_node(t, bundle, aux, v, a, b, threshold, sense, stats):
    """Leftmost point of S(v) with x in [a..b] on the threshold's side.

    Returns (node-local position, Point) or None. sense BELOW keeps y <=
    threshold, ABOVE keeps y >= threshold. At most three blocks are queried:
    the two boundary blocks and one middle block selected via the D summaries.
    """
    blocks0 = stats.block_queries
    nr = t.noderange(v, a, b, stats)
    if nr is None:
        return None
    a_v, b_v = nr
    lev = v.level
    bsz = aux.b
    le = sense == BELOW
    gi = (a_v - 1) // bsz + 1
    gj = (b_v - 1) // bsz + 1

    def block_query(g, p, q):
        stats.block_queries += 1
        pred0 = stats.predecessor_probes
        gb = aux.block_id(v, g)
        blen = int(aux.blen[lev][gb])
        if le:
            rt = pred_rank_in_block(t, aux, v, g, threshold, stats)
            ok = rt >= 1
        else:
            rt = pred_rank_in_block(t, aux, v, g, threshold - 1, stats) + 1
            ok = rt <= blen
        assert stats.predecessor_probes - pred0 <= ceil_log2(max(blen, 1)) + 1
        if not ok:
            return None
        return leftmost_in_block(t, aux, v, g, p, q, rt, LE if le else GE, stats)

    def finish(g, r):
        pos = (g - 1) * bsz + r
        return pos, t.resolve_point(v, pos, stats)

    p_i = a_v - (gi - 1) * bsz
    if gi == gj:
        q_i = b_v - (gi - 1) * bsz
    else:
        q_i = int(aux.blen[lev][aux.block_id(v, gi)])
    r = block_query(gi, p_i, q_i)
    if r is not None:
        return finish(gi, r)
    if gj > gi:
        if gj - gi >= 2:
            blk0 = int(aux.nblk_base[lev][v.index])
            inst = aux.d_instance(lev, LE if le else GE)
            arr = aux.d_min[lev] if le else aux.d_max[lev]
            hit = leftmost_beyond_generic(
                lambda lo, hi: aux.packed.query(inst, lo, hi),
                lambda bidx: int(arr[bidx]),
                blk0 + gi,
                blk0 + gj - 2,
                threshold,
                LE if le else GE,
                stats,
            )
            if hit is not None:
                g = hit - blk0 + 1
                r = block_query(g, 1, int(aux.blen[lev][hit]))
                assert r is not None, "D summary promised a qualifying block"
                assert stats.block_queries - blocks0 <= 3
                return finish(g, r)
        r = block_query(gj, 1, b_v - (gj - 1) * bsz)
        assert stats.block_queries - blocks0 <= 3
        if r is not None:
            return finish(gj, r)
    return None


def leftmost_in_rect(t, bundle, aux, rect: Rect, stats) -> Point | None:
    """The minimum-x point of S inside the rectangle, via the LCA split."""
    rect.validate_rank(t.n)
    v = t.lca_node(rect.c, rect.d)
    if v.level == t.L:
        x = int(t.xs_by_y[rect.c - 1])
        return Point(x, rect.c) if rect.a <= x <= rect.b else None
    vl, vr = t.children(v)
    res_l = leftmost_halfplane_in_node(t, bundle, aux, vl, rect.a, rect.b, rect.c, ABOVE, stats)
    res_r = leftmost_halfplane_in_node(t, bundle, aux, vr, rect.a, rect.b, rect.d, BELOW, stats)
    if res_l is None:
        return res_r[1] if res_r is not None else None
    if res_r is None:
        return res_l[1]
    p_l = t.translate_edge(v, res_l[0], FROM_LEFT_CHILD)
    p_r = t.translate_edge(v, res_r[0], FROM_RIGHT_CHILD)
    return res_l[1] if p_l < p_r else res_r[1]


def lowest_in_rect_baseline(t, bundle, rect: Rect, stats) -> Point | None:
    """The minimum-y point of S inside the rectangle (path binary search).

    Walks the root-to-leaf(c) path: the deepest path node still intersecting
    the query is located with 3-sided emptiness tests, then the answer is the
    first point reported below d in that node's right child.
    """
    rect.validate_rank(t.n)
    a, b, c, d = rect.a, rect.b, rect.c, rect.d
    v = t.lca_node(c, d)
    if v.level == t.L:
        x = int(t.xs_by_y[c - 1])
        return Point(x, c) if a <= x <= b else None
    e0 = stats.emptiness_queries
    vl, vr = t.children(v)
    empty_l = emptiness(t, bundle, vl, a, b, c, ABOVE, stats)
    empty_r = emptiness(t, bundle, vr, a, b, d, BELOW, stats)
    if empty_l and empty_r:
        return None
    if empty_l:
        v_f = v
    else:
        lo, hi = v.level + 1, t.L  # node at depth k on the path: (c-1) >> (L-k)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            u = NodeRef(mid, (c - 1) >> (t.L - mid))
            if emptiness(t, bundle, u, a, b, c, ABOVE, stats):
                hi = mid - 1
            else:
                lo = mid
        v_f = NodeRef(lo, (c - 1) >> (t.L - lo))
    assert stats.emptiness_queries - e0 <= ceil_log2(t.L + 1) + 2
    if v_f.level == t.L:
        x = int(t.xs_by_y[c - 1])
        assert a <= x <= b, "nonempty leaf must hold a query point"
        return Point(x, c)
    if v_f.level > v.level:
        # the path child of v_f must be its left child
        assert ((c - 1) >> (t.L - v_f.level - 1)) & 1 == 0
    u_r = t.children(v_f)[1]
    nr = t.noderange(u_r, a, b, stats)
    assert nr is not None, "right child of the deepest nonempty node holds a point"
    got: list[Point] = []
    report_halfplane(t, bundle, u_r, nr[0], nr[1], d, BELOW, got.append, 1, stats)
    assert got, "limit-1 report below d must produce the lowest point"
    return got[0]
