"""Position-only range min/max indices and threshold search.

Two layouts sit behind the same interface:

* ``sparse`` — the classic table of argopt positions, O(m lg m) words. Default
  for desk-scale sequences.
* ``blocked`` — 64-element blocks with per-block argopt positions and a sparse
  table over block extrema, O(m) words. Used automatically for long sequences
  and by the per-level structures of the range tree (``PackedArgopt``).

The index never returns values and cannot compare against external thresholds
by itself; it keeps per-position order ranks internally (counted by
``size_bits``) and `leftmost_beyond` takes an accessor for value probes.
"""

from __future__ import annotations

import numpy as np

from .model import OutOfRange

MIN = "MIN"
MAX = "MAX"
LE = "LE"
GE = "GE"

BLOCK = 64
_I32_MAX = np.int32(np.iinfo(np.int32).max)


def ceil_log2(x: int) -> int:
    """Smallest k with 2**k >= x, for x >= 1."""
    return (int(x) - 1).bit_length()


class PackedArgopt:
    """Many MIN-sense argopt instances packed over one flat int32 key array.

    Max-sense callers store negated keys. Positions are 0-based and local to
    an instance; queried ranges must contain no duplicate keys for the
    leftmost-tie guarantee to be meaningful (all internal uses guarantee it).
    """

    __slots__ = ("keys", "key_base", "blk_base", "tbl_base", "tbl_k", "blk_pos", "tbl")

    def __init__(self, key_arrays: list[np.ndarray]):
        lengths = [len(a) for a in key_arrays]
        self.keys = (
            np.concatenate(key_arrays).astype(np.int32)
            if key_arrays
            else np.empty(0, dtype=np.int32)
        )
        n_inst = len(key_arrays)
        self.key_base = np.zeros(n_inst + 1, dtype=np.int64)
        np.cumsum(lengths, out=self.key_base[1:])
        nbs = [(ln + BLOCK - 1) // BLOCK for ln in lengths]
        ks = [max(1, ceil_log2(nb) + 1) if nb else 0 for nb in nbs]
        self.blk_base = np.zeros(n_inst + 1, dtype=np.int64)
        np.cumsum(nbs, out=self.blk_base[1:])
        self.tbl_base = np.zeros(n_inst + 1, dtype=np.int64)
        np.cumsum([k * nb for k, nb in zip(ks, nbs)], out=self.tbl_base[1:])
        self.tbl_k = np.asarray(ks, dtype=np.int32)
        self.blk_pos = np.empty(int(self.blk_base[-1]), dtype=np.int64)
        self.tbl = np.empty(int(self.tbl_base[-1]), dtype=np.int32)
        for inst in range(n_inst):
            self._build_instance(inst, lengths[inst], nbs[inst], ks[inst])

    def _build_instance(self, inst: int, ln: int, nb: int, k_rows: int):
        if ln == 0:
            return
        base = int(self.key_base[inst])
        keys = self.keys[base : base + ln]
        padded = np.full(nb * BLOCK, _I32_MAX, dtype=np.int32)
        padded[:ln] = keys
        grid = padded.reshape(nb, BLOCK)
        local_arg = np.argmin(grid, axis=1)
        bpos = local_arg + np.arange(nb, dtype=np.int64) * BLOCK + base
        self.blk_pos[self.blk_base[inst] : self.blk_base[inst] + nb] = bpos
        bkeys = grid[np.arange(nb), local_arg]
        # sparse table over blocks; row k holds the best block of [g, g+2^k)
        tb = int(self.tbl_base[inst])
        rows = self.tbl[tb : tb + k_rows * nb].reshape(k_rows, nb)
        rows[0] = np.arange(nb, dtype=np.int32)
        for k in range(1, k_rows):
            half = 1 << (k - 1)
            prev = rows[k - 1]
            rows[k] = prev
            lhs = prev[: nb - half]
            rhs = prev[half:]
            # strict comparison keeps the leftmost block on equal keys
            rows[k][: nb - half] = np.where(bkeys[rhs] < bkeys[lhs], rhs, lhs)

    def instance_len(self, inst: int) -> int:
        return int(self.key_base[inst + 1] - self.key_base[inst])

    def query(self, inst: int, lo: int, hi: int) -> int:
        """Position of the minimum key in local inclusive range [lo..hi]."""
        base = int(self.key_base[inst])
        keys = self.keys
        g1, g2 = lo >> 6, hi >> 6
        if g2 - g1 < 2:
            best = base + lo
            for p in range(base + lo + 1, base + hi + 1):
                if keys[p] < keys[best]:
                    best = p
            return best - base
        best = base + lo
        for p in range(base + lo + 1, base + ((g1 + 1) << 6)):
            if keys[p] < keys[best]:
                best = p
        bb = int(self.blk_base[inst])
        ga, gb = g1 + 1, g2 - 1
        k = ceil_log2(gb - ga + 2) - 1  # floor(lg(count))
        tb = int(self.tbl_base[inst])
        nb = int(self.blk_base[inst + 1] - self.blk_base[inst])
        row = tb + k * nb
        cand1 = int(self.tbl[row + ga])
        cand2 = int(self.tbl[row + gb - (1 << k) + 1])
        p1 = int(self.blk_pos[bb + cand1])
        p2 = int(self.blk_pos[bb + cand2])
        mid = p1 if (keys[p1] < keys[p2] or (keys[p1] == keys[p2] and p1 < p2)) else p2
        if keys[mid] < keys[best] or (keys[mid] == keys[best] and mid < best):
            best = mid
        for p in range(base + (g2 << 6), base + hi + 1):
            if keys[p] < keys[best]:
                best = p
        return best - base

    def size_bits(self) -> int:
        return (self.keys.nbytes + self.blk_pos.nbytes + self.tbl.nbytes) * 8


class RmqIndex:
    """Range min/max positions over one value sequence; stores order ranks only."""

    __slots__ = ("m", "layout", "rank_min", "rank_max", "_tables", "_packed")

    def __init__(self, values, layout: str = "auto"):
        vals = np.asarray(values)
        self.m = len(vals)
        if layout == "auto":
            layout = "sparse" if self.m <= 2048 else "blocked"
        self.layout = layout
        pos = np.arange(self.m)
        if self.m:
            order_min = np.argsort(vals, kind="stable")
            if np.issubdtype(vals.dtype, np.number):
                order_max = np.lexsort((pos, -vals.astype(np.int64, copy=False)
                                        if np.issubdtype(vals.dtype, np.integer) else -vals))
            else:
                order_max = _descending_stable(vals)
            self.rank_min = np.empty(self.m, dtype=np.int32)
            self.rank_min[order_min] = pos.astype(np.int32)
            self.rank_max = np.empty(self.m, dtype=np.int32)
            self.rank_max[order_max] = pos.astype(np.int32)
        else:
            self.rank_min = np.empty(0, dtype=np.int32)
            self.rank_max = np.empty(0, dtype=np.int32)
        self._tables = None
        self._packed = None
        if self.m == 0:
            return
        if layout == "sparse":
            self._tables = (
                _SparseTable(self.rank_min),
                _SparseTable(self.rank_max),
            )
        elif layout == "blocked":
            self._packed = PackedArgopt([self.rank_min, self.rank_max])
        else:
            raise ValueError(f"unknown rmq layout {layout!r}")

    def argopt(self, i: int, j: int, sense: str) -> int:
        """Position (1-based) of the extreme value in [i..j]; leftmost on ties."""
        if not 1 <= i <= j <= self.m:
            raise OutOfRange(f"rmq range [{i}..{j}] invalid for length {self.m}")
        which = 0 if sense == MIN else 1
        if self._tables is not None:
            return self._tables[which].query(i - 1, j - 1) + 1
        return self._packed.query(which, i - 1, j - 1) + 1

    def leftmost_beyond(self, i, j, threshold, sense, access, stats=None):
        """Smallest p in [i..j] with access(p) <= threshold (LE) / >= (GE)."""
        if not 1 <= i <= j <= self.m:
            raise OutOfRange(f"rmq range [{i}..{j}] invalid for length {self.m}")
        opt_sense = MAX if sense == GE else MIN
        return leftmost_beyond_generic(
            lambda lo, hi: self.argopt(lo, hi, opt_sense),
            access,
            i,
            j,
            threshold,
            sense,
            stats,
        )

    def size_bits(self) -> int:
        bits = (self.rank_min.nbytes + self.rank_max.nbytes) * 8
        if self._tables is not None:
            for tab in self._tables:
                bits += sum(row.nbytes for row in tab.rows) * 8
        if self._packed is not None:
            bits += (self._packed.blk_pos.nbytes + self._packed.tbl.nbytes) * 8
        return bits


def _descending_stable(vals: np.ndarray) -> np.ndarray:
    """Stable descending order for non-numeric comparables."""
    asc = np.argsort(vals, kind="stable")
    out = []
    i = len(asc) - 1
    while i >= 0:
        j = i
        while j > 0 and vals[asc[j - 1]] == vals[asc[i]]:
            j -= 1
        out.extend(asc[j : i + 1])
        i = j - 1
    return np.asarray(out)


class _SparseTable:
    """Argmin positions over a duplicate-free rank array, O(m lg m) words."""

    __slots__ = ("ranks", "rows")

    def __init__(self, ranks: np.ndarray):
        self.ranks = ranks
        m = len(ranks)
        rows = [np.arange(m, dtype=np.int32)]
        k = 1
        while (1 << k) <= m:
            half = 1 << (k - 1)
            width = m - (1 << k) + 1
            prev = rows[-1]
            lhs = prev[:width]
            rhs = prev[half : half + width]
            rows.append(np.where(ranks[rhs] < ranks[lhs], rhs, lhs))
            k += 1
        self.rows = rows

    def query(self, lo: int, hi: int) -> int:
        k = ceil_log2(hi - lo + 2) - 1
        p1 = int(self.rows[k][lo])
        p2 = int(self.rows[k][hi - (1 << k) + 1])
        return p1 if self.ranks[p1] < self.ranks[p2] else p2


def build_rmq(values, layout: str = "auto") -> RmqIndex:
    return RmqIndex(values, layout)


def argopt(ix: RmqIndex, i: int, j: int, sense: str) -> int:
    return ix.argopt(i, j, sense)


def leftmost_beyond(ix: RmqIndex, i, j, threshold, sense, access, stats=None):
    return ix.leftmost_beyond(i, j, threshold, sense, access, stats)


def leftmost_beyond_generic(argopt_fn, access, i, j, threshold, sense, stats=None):
    """Binary descent shared by RmqIndex and the block/sub-block summaries.

    Uses at most ceil(lg(j-i+1)) + 1 argopt probes and as many access calls;
    the bound is asserted. argopt_fn must answer with the extreme position for
    the matching sense (MAX for GE, MIN for LE).
    """
    ge = sense == GE
    budget = ceil_log2(j - i + 1) + 1
    probes = 0

    def opt(lo, hi):
        nonlocal probes
        probes += 1
        if stats is not None:
            stats.rmq_probes += 1
        return argopt_fn(lo, hi)

    def ok(p):
        v = access(p)
        return v >= threshold if ge else v <= threshold

    if not ok(opt(i, j)):
        return None
    lo, hi = i, j
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(opt(lo, mid)):
            hi = mid
        else:
            lo = mid + 1
    assert probes <= budget, f"leftmost_beyond used {probes} probes, budget {budget}"
    return lo
