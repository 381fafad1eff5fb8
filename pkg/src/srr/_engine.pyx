# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled query engine: same algorithms and probe counters as the Python modules.

Consumes the flat arrays produced by srr.engine.flatten_index; nothing is
rebuilt here, so answers depend only on the shared structure. All internal
positions are the same 1-based conventions the Python code uses. Budget
violations (the hard assertions of the probe-count contracts) set a flag that
surfaces as an AssertionError from the public entry points.
"""

import numpy as np

cimport cython

cdef extern from *:
    """
    #define POPCNT(x) __builtin_popcountll((unsigned long long)(x))
    #define CLZLL(x) __builtin_clzll((unsigned long long)(x))
    """
    int POPCNT(unsigned long long x) nogil
    int CLZLL(unsigned long long x) nogil

cdef inline long long bit_length(long long x) nogil:
    if x <= 0:
        return 0
    return 64 - CLZLL(<unsigned long long> x)

cdef inline long long ceil_log2(long long x) nogil:
    return bit_length(x - 1)

cdef enum:
    C_EMPT = 0
    C_RMQ = 1
    C_RES = 2
    C_DESC = 3
    C_BLK = 4
    C_SUB = 5
    C_PRED = 6
    C_SUCC = 7

cdef enum:
    SEL_SAMPLE = 512


cdef class Engine:
    cdef readonly long long n, n_hat, L, B, s
    cdef bint has_stored, has_table
    cdef long long w_per, s_per
    cdef int[::1] ys_by_x, xs_by_y
    cdef unsigned long long[:, ::1] words
    cdef long long[:, ::1] sup, zsup
    cdef unsigned short[:, ::1] blkr
    cdef int[::1] sel1, sel0
    cdef long long[::1] sel1_off, sel0_off
    cdef long long[::1] noff, noff_base
    cdef int[::1] mat_row
    cdef int[:, ::1] mat
    cdef int[::1] bp_keys, bp_tbl, ap_keys, ap_tbl
    cdef long long[::1] bp_key_base, bp_blk_base, bp_tbl_base, bp_blk_pos
    cdef long long[::1] ap_key_base, ap_blk_base, ap_tbl_base, ap_blk_pos
    cdef int[::1] bp_k, ap_k
    cdef int[:, ::1] yrank, rpos, stored_y
    cdef long long[::1] nbb, nbb_base, bstart, lvl_blk, sub_base, sub_base_off, lvl_sub
    cdef long long[::1] sub_content
    cdef int[::1] blen, dmin, dmax, emin, emax
    cdef unsigned char[::1] tbl_le, tbl_ge
    cdef long long tw_w, tw_t, tw_r
    cdef long long[::1] stk
    cdef int[:, ::1] ebuf, sbuf
    cdef long long[::1] nxt, stamp
    cdef long long stamp_ctr
    cdef long long viol

    def __init__(self, config, ys_by_x, xs_by_y, words, sup, blk, zsup,
                 sel1, sel1_off, sel0, sel0_off, noff, noff_base, mat_row, mat,
                 bp_keys, bp_key_base, bp_blk_base, bp_tbl_base, bp_k, bp_blk_pos, bp_tbl,
                 ap_keys, ap_key_base, ap_blk_base, ap_tbl_base, ap_k, ap_blk_pos, ap_tbl,
                 yrank, rpos, nbb, nbb_base, bstart, blen, lvl_blk, dmin, dmax,
                 sub_base, sub_base_off, emin, emax, lvl_sub, stored_y, sub_content,
                 tbl_le, tbl_ge, tbl_dims):
        self.n = config[0]
        self.n_hat = config[1]
        self.L = config[2]
        self.B = config[3]
        self.s = config[4]
        self.has_stored = config[5] != 0
        self.has_table = config[6] != 0
        self.w_per = config[7]
        self.s_per = config[8]
        self.ys_by_x = ys_by_x
        self.xs_by_y = xs_by_y
        self.words = words
        self.sup = sup
        self.blkr = blk
        self.zsup = zsup
        self.sel1 = sel1
        self.sel1_off = sel1_off
        self.sel0 = sel0
        self.sel0_off = sel0_off
        self.noff = noff
        self.noff_base = noff_base
        self.mat_row = mat_row
        self.mat = mat
        self.bp_keys = bp_keys
        self.bp_key_base = bp_key_base
        self.bp_blk_base = bp_blk_base
        self.bp_tbl_base = bp_tbl_base
        self.bp_k = bp_k
        self.bp_blk_pos = bp_blk_pos
        self.bp_tbl = bp_tbl
        self.ap_keys = ap_keys
        self.ap_key_base = ap_key_base
        self.ap_blk_base = ap_blk_base
        self.ap_tbl_base = ap_tbl_base
        self.ap_k = ap_k
        self.ap_blk_pos = ap_blk_pos
        self.ap_tbl = ap_tbl
        self.yrank = yrank
        self.rpos = rpos
        self.nbb = nbb
        self.nbb_base = nbb_base
        self.bstart = bstart
        self.blen = blen
        self.lvl_blk = lvl_blk
        self.dmin = dmin
        self.dmax = dmax
        self.sub_base = sub_base
        self.sub_base_off = sub_base_off
        self.emin = emin
        self.emax = emax
        self.lvl_sub = lvl_sub
        self.stored_y = stored_y
        self.sub_content = sub_content
        self.tbl_le = tbl_le
        self.tbl_ge = tbl_ge
        self.tw_w = tbl_dims[0]
        self.tw_t = tbl_dims[1]
        self.tw_r = tbl_dims[2]
        cap = max(self.n, 1)
        self.stk = np.empty(2 * cap + 8, dtype=np.int64)
        self.ebuf = np.empty((cap, 2), dtype=np.int32)
        self.sbuf = np.empty((cap, 2), dtype=np.int32)
        self.nxt = np.empty(cap + 2, dtype=np.int64)
        self.stamp = np.zeros(cap + 2, dtype=np.int64)
        self.stamp_ctr = 0
        self.viol = 0

    # ---- bit vector primitives -------------------------------------------

    cdef inline long long _rank1(self, long long lev, long long i) nogil:
        if i <= 0:
            return 0
        cdef long long w = (i - 1) >> 6
        cdef long long r = self.sup[lev, w >> 3] + self.blkr[lev, w]
        cdef long long rem = i - (w << 6)
        cdef unsigned long long word = self.words[lev, w]
        if rem < 64:
            word &= ((<unsigned long long> 1) << rem) - 1
        return r + POPCNT(word)

    cdef inline long long _rank_bit(self, long long lev, long long bit, long long i) nogil:
        cdef long long ones = self._rank1(lev, i)
        return ones if bit else i - ones

    cdef inline long long _getbit(self, long long lev, long long pos) nogil:
        return <long long> ((self.words[lev, pos >> 6] >> (pos & 63)) & 1)

    cdef long long _select_in_word(self, unsigned long long word, long long j) nogil:
        cdef long long pos = 0, width, half
        width = 32
        while width >= 1:
            half = POPCNT(word & (((<unsigned long long> 1) << width) - 1))
            if j > half:
                j -= half
                word >>= width
                pos += width
            width >>= 1
        return pos

    cdef long long _select_level(self, long long lev, long long bit, long long j) nogil:
        """1-based level position of the j-th `bit`; mirrors BitVector.select."""
        cdef long long k = (j - 1) / SEL_SAMPLE
        cdef long long cnt_samp, lo, hi, mid, rem, w0, w1, w, c
        cdef unsigned long long word
        if bit:
            cnt_samp = self.sel1_off[lev + 1] - self.sel1_off[lev]
            lo = self.sel1[self.sel1_off[lev] + k]
            hi = self.sel1[self.sel1_off[lev] + (k + 1 if k + 1 < cnt_samp else cnt_samp - 1)]
        else:
            cnt_samp = self.sel0_off[lev + 1] - self.sel0_off[lev]
            lo = self.sel0[self.sel0_off[lev] + k]
            hi = self.sel0[self.sel0_off[lev] + (k + 1 if k + 1 < cnt_samp else cnt_samp - 1)]
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if (self.sup[lev, mid] if bit else self.zsup[lev, mid]) < j:
                lo = mid
            else:
                hi = mid - 1
        rem = j - (self.sup[lev, lo] if bit else self.zsup[lev, lo])
        w0 = lo << 3
        w1 = w0 + 8
        if w1 > self.w_per:
            w1 = self.w_per
        for w in range(w0, w1):
            word = self.words[lev, w]
            if not bit:
                word = ~word
                if w == self.w_per - 1 and (self.n & 63) != 0:
                    word &= ((<unsigned long long> 1) << (self.n & 63)) - 1
            c = POPCNT(word)
            if rem <= c:
                return (w << 6) + self._select_in_word(word, rem) + 1
            rem -= c
        return -1  # unreachable for valid j

    # ---- packed argopt ------------------------------------------------------

    cdef long long _pa_query(self, bint aux, long long inst, long long lo, long long hi) nogil:
        cdef const int* keys
        cdef const long long* key_base
        cdef const long long* blk_base
        cdef const long long* tbl_base
        cdef const long long* blk_pos
        cdef const int* tbl
        if aux:
            keys = &self.ap_keys[0]
            key_base = &self.ap_key_base[0]
            blk_base = &self.ap_blk_base[0]
            tbl_base = &self.ap_tbl_base[0]
            blk_pos = &self.ap_blk_pos[0]
            tbl = &self.ap_tbl[0]
        else:
            keys = &self.bp_keys[0]
            key_base = &self.bp_key_base[0]
            blk_base = &self.bp_blk_base[0]
            tbl_base = &self.bp_tbl_base[0]
            blk_pos = &self.bp_blk_pos[0]
            tbl = &self.bp_tbl[0]
        cdef long long base = key_base[inst]
        cdef long long g1 = lo >> 6, g2 = hi >> 6
        cdef long long best, p, bb, ga, gb, k, tb, nb, row, cand1, cand2, p1, p2, mid
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
        bb = blk_base[inst]
        ga = g1 + 1
        gb = g2 - 1
        k = ceil_log2(gb - ga + 2) - 1
        tb = tbl_base[inst]
        nb = blk_base[inst + 1] - blk_base[inst]
        row = tb + k * nb
        cand1 = tbl[row + ga]
        cand2 = tbl[row + gb - ((<long long> 1) << k) + 1]
        p1 = blk_pos[bb + cand1]
        p2 = blk_pos[bb + cand2]
        if keys[p1] < keys[p2] or (keys[p1] == keys[p2] and p1 < p2):
            mid = p1
        else:
            mid = p2
        if keys[mid] < keys[best] or (keys[mid] == keys[best] and mid < best):
            best = mid
        for p in range(base + (g2 << 6), base + hi + 1):
            if keys[p] < keys[best]:
                best = p
        return best - base

    # ---- tree operations -----------------------------------------------------

    cdef bint _noderange(self, long long vlev, long long vidx, long long a, long long b,
                         long long* av, long long* bv, long long* cnt) nogil:
        cdef long long lo = a, hi = b, k, bit, off, base, lo2, hi2
        for k in range(vlev):
            bit = (vidx >> (vlev - 1 - k)) & 1
            off = self.noff[self.noff_base[k] + (vidx >> (vlev - k))]
            cnt[C_DESC] += 1
            base = self._rank_bit(k, bit, off)
            lo2 = self._rank_bit(k, bit, off + lo - 1) - base + 1
            hi2 = self._rank_bit(k, bit, off + hi) - base
            if lo2 > hi2:
                return False
            lo = lo2
            hi = hi2
        av[0] = lo
        bv[0] = hi
        return True

    cdef void _resolve(self, long long lev, long long idx, long long pos,
                       long long* cnt, long long* x, long long* y) nogil:
        cnt[C_RES] += 1
        cdef long long off, bit, row
        while True:
            if lev == self.L:
                y[0] = idx + 1
                x[0] = self.xs_by_y[idx]
                return
            if lev == 0:
                x[0] = pos
                y[0] = self.ys_by_x[pos - 1]
                return
            row = self.mat_row[lev]
            if row >= 0:
                x[0] = self.mat[row, self.noff[self.noff_base[lev] + idx] + pos - 1]
                y[0] = self.ys_by_x[x[0] - 1]
                return
            off = self.noff[self.noff_base[lev] + idx]
            bit = self._getbit(lev, off + pos - 1)
            cnt[C_DESC] += 1
            pos = self._rank_bit(lev, bit, off + pos) - self._rank_bit(lev, bit, off)
            idx = 2 * idx + bit
            lev += 1

    cdef inline long long _bundle_argopt(self, long long lev, long long off, long long i,
                                         long long j, bint want_max, long long* cnt) nogil:
        cnt[C_RMQ] += 1
        cdef long long inst = lev + (self.L + 1 if want_max else 0)
        return self._pa_query(False, inst, off + i - 1, off + j - 1) - off + 1

    cdef bint _emptiness(self, long long vlev, long long vidx, long long a, long long b,
                         long long thr, bint above, long long* cnt) nogil:
        cnt[C_EMPT] += 1
        cdef long long av, bv, p, x, y, off
        if not self._noderange(vlev, vidx, a, b, &av, &bv, cnt):
            return True
        off = self.noff[self.noff_base[vlev] + vidx]
        p = self._bundle_argopt(vlev, off, av, bv, above, cnt)
        self._resolve(vlev, vidx, p, cnt, &x, &y)
        return y < thr if above else y > thr

    cdef long long _report_halfplane(self, long long vlev, long long vidx, long long av,
                                     long long bv, long long thr, bint below,
                                     long long limit, int[:, ::1] buf, long long out_base,
                                     long long* cnt) nogil:
        if limit == 0:
            return 0
        cdef long long count = 0, sp = 0, i, j, p, x, y
        cdef long long off = self.noff[self.noff_base[vlev] + vidx]
        cdef bint ok
        self.stk[0] = av
        self.stk[1] = bv
        sp = 2
        while sp > 0:
            sp -= 2
            i = self.stk[sp]
            j = self.stk[sp + 1]
            cnt[C_RMQ] += 1
            p = self._pa_query(False, vlev + (0 if below else self.L + 1),
                               off + i - 1, off + j - 1) - off + 1
            self._resolve(vlev, vidx, p, cnt, &x, &y)
            ok = (y <= thr) if below else (y >= thr)
            if not ok:
                continue
            buf[out_base + count, 0] = <int> x
            buf[out_base + count, 1] = <int> y
            count += 1
            if limit >= 0 and count >= limit:
                break
            if p + 1 <= j:
                self.stk[sp] = p + 1
                self.stk[sp + 1] = j
                sp += 2
            if i <= p - 1:
                self.stk[sp] = i
                self.stk[sp + 1] = p - 1
                sp += 2
        return count

    cdef long long _report_rect(self, long long a, long long b, long long c, long long d,
                                long long limit, int[:, ::1] buf, long long* left_count,
                                long long* cnt) nogil:
        cdef long long diff = (c - 1) ^ (d - 1)
        cdef long long vlev, vidx, h, x, count, av, bv, rem
        left_count[0] = 0
        if limit == 0:
            return 0
        if diff == 0:
            x = self.xs_by_y[c - 1]
            if a <= x <= b:
                buf[0, 0] = <int> x
                buf[0, 1] = <int> c
                return 1
            return 0
        h = bit_length(diff)
        vlev = self.L - h
        vidx = (c - 1) >> h
        count = 0
        if self._noderange(vlev + 1, 2 * vidx, a, b, &av, &bv, cnt):
            count += self._report_halfplane(vlev + 1, 2 * vidx, av, bv, c, False,
                                            limit, buf, 0, cnt)
        left_count[0] = count
        if limit >= 0 and count >= limit:
            return count
        if self._noderange(vlev + 1, 2 * vidx + 1, a, b, &av, &bv, cnt):
            rem = -1 if limit < 0 else limit - count
            count += self._report_halfplane(vlev + 1, 2 * vidx + 1, av, bv, d, True,
                                            rem, buf, count, cnt)
        return count

    # ---- block machinery --------------------------------------------------------

    cdef long long _pred_rank(self, long long lev, long long idx, long long g, long long fb,
                              long long d, long long* cnt) nogil:
        cdef long long blen = self.blen[fb]
        cdef long long slot = self.bstart[fb]
        cdef long long local_base = (g - 1) * self.B
        cdef long long lo = 0, hi = blen, mid, p, xdis, y
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            cnt[C_PRED] += 1
            if self.has_stored:
                y = self.stored_y[lev, slot + mid - 1]
            else:
                p = self.rpos[lev, slot + mid - 1]
                self._resolve(lev, idx, local_base + p, cnt, &xdis, &y)
            if y <= d:
                lo = mid
            else:
                hi = mid - 1
        return lo

    cdef long long _resolve_sub(self, long long lev, long long gb, long long slot_base,
                                long long h, long long lo, long long hi, long long rt,
                                bint ge, long long* cnt) nogil:
        """0 = no hit, else 1-based block-local position."""
        cnt[C_SUB] += 1
        cdef long long s = self.s, content, key, rel, pos, v
        if self.has_table:
            content = self.sub_content[self.lvl_sub[lev]
                                       + self.sub_base[self.sub_base_off[lev] + gb] + h - 1]
            key = (content
                   | (rt << (s * self.tw_w))
                   | ((lo - (h - 1) * s - 1) << (s * self.tw_w + self.tw_t))
                   | ((hi - (h - 1) * s - 1) << (s * self.tw_w + self.tw_t + self.tw_r)))
            rel = self.tbl_ge[key] if ge else self.tbl_le[key]
            return (h - 1) * s + rel if rel else 0
        for pos in range(lo, hi + 1):
            v = self.yrank[lev, slot_base + pos - 1]
            if (v >= rt) if ge else (v <= rt):
                return pos
        return 0

    cdef long long _lb(self, long long inst, const int* vals, long long vbase,
                       long long lo, long long hi, long long thr, bint ge,
                       long long* cnt) nogil:
        """leftmost_beyond over the aux pack; -1 if nothing qualifies."""
        cdef long long budget = ceil_log2(hi - lo + 1) + 1
        cdef long long probes = 1, p, v, mid
        cdef bint ok
        cnt[C_RMQ] += 1
        p = self._pa_query(True, inst, lo, hi)
        v = vals[vbase + p]
        ok = (v >= thr) if ge else (v <= thr)
        if not ok:
            return -1
        while lo < hi:
            mid = (lo + hi) >> 1
            probes += 1
            cnt[C_RMQ] += 1
            p = self._pa_query(True, inst, lo, mid)
            v = vals[vbase + p]
            if (v >= thr) if ge else (v <= thr):
                hi = mid
            else:
                lo = mid + 1
        if probes > budget:
            self.viol = 1
        return lo

    cdef long long _block_query(self, long long lev, long long idx, long long g,
                                long long thr, bint below, long long p, long long q,
                                long long* cnt) nogil:
        """0 = no hit, else 1-based block-local position."""
        cnt[C_BLK] += 1
        cdef long long pred0 = cnt[C_PRED]
        cdef long long gb = self.nbb[self.nbb_base[lev] + idx] + g - 1
        cdef long long fb = self.lvl_blk[lev] + gb
        cdef long long blen = self.blen[fb]
        cdef long long rt
        cdef bint ok, ge
        if below:
            rt = self._pred_rank(lev, idx, g, fb, thr, cnt)
            ok = rt >= 1
            ge = False
        else:
            rt = self._pred_rank(lev, idx, g, fb, thr - 1, cnt) + 1
            ok = rt <= blen
            ge = True
        if cnt[C_PRED] - pred0 > ceil_log2(blen if blen > 1 else 1) + 1:
            self.viol = 2
        if not ok:
            return 0
        return self._leftmost_in_block(lev, idx, gb, fb, p, q, rt, ge, cnt)

    cdef long long _leftmost_in_block(self, long long lev, long long idx, long long gb,
                                      long long fb, long long p, long long q, long long rt,
                                      bint ge, long long* cnt) nogil:
        cdef long long blen = self.blen[fb]
        cdef long long slot_base = self.bstart[fb]
        cdef long long s = self.s
        cdef long long sb_p = (p - 1) / s + 1
        cdef long long sb_q = (q - 1) / s + 1
        cdef long long r, sub0, hit, h, e
        if sb_p == sb_q:
            return self._resolve_sub(lev, gb, slot_base, sb_p, p, q, rt, ge, cnt)
        r = self._resolve_sub(lev, gb, slot_base, sb_p, p, sb_p * s, rt, ge, cnt)
        if r:
            return r
        if sb_q - sb_p >= 2:
            sub0 = self.sub_base[self.sub_base_off[lev] + gb]
            if ge:
                hit = self._lb(3 * (self.L + 1) + lev, &self.emax[0], self.lvl_sub[lev],
                               sub0 + sb_p, sub0 + sb_q - 2, rt, True, cnt)
            else:
                hit = self._lb(2 * (self.L + 1) + lev, &self.emin[0], self.lvl_sub[lev],
                               sub0 + sb_p, sub0 + sb_q - 2, rt, False, cnt)
            if hit >= 0:
                h = hit - sub0 + 1
                e = h * s
                if e > blen:
                    e = blen
                r = self._resolve_sub(lev, gb, slot_base, h, (h - 1) * s + 1, e, rt, ge, cnt)
                if r == 0:
                    self.viol = 3
                return r
        return self._resolve_sub(lev, gb, slot_base, sb_q, (sb_q - 1) * s + 1, q, rt, ge, cnt)

    cdef bint _leftmost_halfplane(self, long long lev, long long idx, long long a,
                                  long long b, long long thr, bint below, long long* cnt,
                                  long long* pos, long long* x, long long* y) nogil:
        cdef long long blocks0 = cnt[C_BLK]
        cdef long long av, bv, gi, gj, q_i, r, blk0, hit, g, fb_i
        if not self._noderange(lev, idx, a, b, &av, &bv, cnt):
            return False
        gi = (av - 1) / self.B + 1
        gj = (bv - 1) / self.B + 1
        if gi == gj:
            q_i = bv - (gi - 1) * self.B
        else:
            fb_i = self.lvl_blk[lev] + self.nbb[self.nbb_base[lev] + idx] + gi - 1
            q_i = self.blen[fb_i]
        r = self._block_query(lev, idx, gi, thr, below, av - (gi - 1) * self.B, q_i, cnt)
        if r:
            pos[0] = (gi - 1) * self.B + r
            self._resolve(lev, idx, pos[0], cnt, x, y)
            return True
        if gj > gi:
            if gj - gi >= 2:
                blk0 = self.nbb[self.nbb_base[lev] + idx]
                if below:
                    hit = self._lb(lev, &self.dmin[0], self.lvl_blk[lev],
                                   blk0 + gi, blk0 + gj - 2, thr, False, cnt)
                else:
                    hit = self._lb(self.L + 1 + lev, &self.dmax[0], self.lvl_blk[lev],
                                   blk0 + gi, blk0 + gj - 2, thr, True, cnt)
                if hit >= 0:
                    g = hit - blk0 + 1
                    r = self._block_query(lev, idx, g, thr, below, 1,
                                          self.blen[self.lvl_blk[lev] + hit], cnt)
                    if r == 0:
                        self.viol = 4
                        return False
                    if cnt[C_BLK] - blocks0 > 3:
                        self.viol = 5
                    pos[0] = (g - 1) * self.B + r
                    self._resolve(lev, idx, pos[0], cnt, x, y)
                    return True
            r = self._block_query(lev, idx, gj, thr, below, 1, bv - (gj - 1) * self.B, cnt)
            if cnt[C_BLK] - blocks0 > 3:
                self.viol = 5
            if r:
                pos[0] = (gj - 1) * self.B + r
                self._resolve(lev, idx, pos[0], cnt, x, y)
                return True
        return False

    cdef long long _leftmost(self, long long a, long long b, long long c, long long d,
                             long long* cnt) nogil:
        cdef long long diff = (c - 1) ^ (d - 1)
        cdef long long vlev, vidx, h, x
        cdef long long pl = 0, pr = 0, xl = 0, yl = 0, xr = 0, yr = 0
        cdef long long off, r0, r1, pl_par, pr_par
        cdef bint lfound, rfound
        if diff == 0:
            x = self.xs_by_y[c - 1]
            if a <= x <= b:
                return (x << 32) | c
            return -1
        h = bit_length(diff)
        vlev = self.L - h
        vidx = (c - 1) >> h
        lfound = self._leftmost_halfplane(vlev + 1, 2 * vidx, a, b, c, False, cnt,
                                          &pl, &xl, &yl)
        rfound = self._leftmost_halfplane(vlev + 1, 2 * vidx + 1, a, b, d, True, cnt,
                                          &pr, &xr, &yr)
        if not lfound and not rfound:
            return -1
        if not rfound:
            return (xl << 32) | yl
        if not lfound:
            return (xr << 32) | yr
        off = self.noff[self.noff_base[vlev] + vidx]
        r0 = self._rank_bit(vlev, 0, off)
        pl_par = self._select_level(vlev, 0, r0 + pl) - off
        r1 = self._rank_bit(vlev, 1, off)
        pr_par = self._select_level(vlev, 1, r1 + pr) - off
        if pl_par < pr_par:
            return (xl << 32) | yl
        return (xr << 32) | yr

    cdef long long _lowest(self, long long a, long long b, long long c, long long d,
                           long long* cnt) nogil:
        cdef long long diff = (c - 1) ^ (d - 1)
        cdef long long vlev, vidx, h, x, y, e0, lo, hi, mid, flev, fidx
        cdef long long ulev, uidx, av, bv, off, p
        cdef bint empty_l, empty_r
        if diff == 0:
            x = self.xs_by_y[c - 1]
            if a <= x <= b:
                return (x << 32) | c
            return -1
        h = bit_length(diff)
        vlev = self.L - h
        vidx = (c - 1) >> h
        e0 = cnt[C_EMPT]
        empty_l = self._emptiness(vlev + 1, 2 * vidx, a, b, c, True, cnt)
        empty_r = self._emptiness(vlev + 1, 2 * vidx + 1, a, b, d, False, cnt)
        if empty_l and empty_r:
            return -1
        if empty_l:
            flev = vlev
            fidx = vidx
        else:
            lo = vlev + 1
            hi = self.L
            while lo < hi:
                mid = (lo + hi + 1) >> 1
                if self._emptiness(mid, (c - 1) >> (self.L - mid), a, b, c, True, cnt):
                    hi = mid - 1
                else:
                    lo = mid
            flev = lo
            fidx = (c - 1) >> (self.L - lo)
        if cnt[C_EMPT] - e0 > ceil_log2(self.L + 1) + 2:
            self.viol = 6
        if flev == self.L:
            x = self.xs_by_y[c - 1]
            if not (a <= x <= b):
                self.viol = 7
            return (x << 32) | c
        if flev > vlev and (((c - 1) >> (self.L - flev - 1)) & 1) != 0:
            self.viol = 8
        ulev = flev + 1
        uidx = 2 * fidx + 1
        if not self._noderange(ulev, uidx, a, b, &av, &bv, cnt):
            self.viol = 9
            return -1
        off = self.noff[self.noff_base[ulev] + uidx]
        cnt[C_RMQ] += 1
        p = self._pa_query(False, ulev, off + av - 1, off + bv - 1) - off + 1
        self._resolve(ulev, uidx, p, cnt, &x, &y)
        if y > d:
            self.viol = 10
            return -1
        return (x << 32) | y

    cdef long long _collect_sorted(self, long long a, long long b, long long c,
                                   long long d, long long k, int[:, ::1] buf,
                                   long long* cnt) nogil:
        cdef long long count = 0, next_a = a, xy, x, y
        cdef bint exhausted = False
        while (k < 0 or count < k) and not exhausted:
            cnt[C_SUCC] += 1
            xy = self._leftmost(next_a, b, c, d, cnt)
            if xy < 0:
                exhausted = True
                break
            x = xy >> 32
            y = xy & <long long> 0xFFFFFFFF
            buf[count, 0] = <int> x
            buf[count, 1] = <int> y
            count += 1
            if x >= b:
                exhausted = True
            else:
                next_a = x + 1
        return count

    cdef int _check_viol(self) except -1:
        if self.viol:
            code = self.viol
            self.viol = 0
            raise AssertionError(f"engine probe-budget violation (code {code})")
        return 0

    # ---- public single-query entry points -------------------------------------

    def leftmost(self, long long a, long long b, long long c, long long d,
                 long long[::1] cnt):
        cdef long long out = self._leftmost(a, b, c, d, &cnt[0])
        self._check_viol()
        return out

    def lowest(self, long long a, long long b, long long c, long long d,
               long long[::1] cnt):
        cdef long long out = self._lowest(a, b, c, d, &cnt[0])
        self._check_viol()
        return out

    def report(self, long long a, long long b, long long c, long long d,
               long long limit, int[:, ::1] buf, long long[::1] cnt):
        cdef long long lc = 0
        cdef long long out = self._report_rect(a, b, c, d, limit, buf, &lc, &cnt[0])
        self._check_viol()
        return out

    def collect_sorted(self, long long a, long long b, long long c, long long d,
                       long long k, int[:, ::1] buf, long long[::1] cnt):
        cdef long long out = self._collect_sorted(a, b, c, d, k, buf, &cnt[0])
        self._check_viol()
        return out

    # ---- bulk drivers ------------------------------------------------------------

    def run_rects(self, long long mode, long long[:, ::1] rects, long long limit,
                  long long[::1] out, long long[::1] maxima, long long[::1] totals):
        """Answer many rectangles; maxima/totals aggregate the 8 counters."""
        cdef long long m = rects.shape[0]
        cdef long long i, j, r
        cdef long long q[8]
        cdef long long lc
        for i in range(m):
            for j in range(8):
                q[j] = 0
            if mode == 0:
                r = self._leftmost(rects[i, 0], rects[i, 1], rects[i, 2], rects[i, 3], q)
            elif mode == 1:
                r = self._lowest(rects[i, 0], rects[i, 1], rects[i, 2], rects[i, 3], q)
            elif mode == 2:
                r = self._report_rect(rects[i, 0], rects[i, 1], rects[i, 2], rects[i, 3],
                                      limit, self.ebuf, &lc, q)
            else:
                r = self._collect_sorted(rects[i, 0], rects[i, 1], rects[i, 2],
                                         rects[i, 3], limit, self.sbuf, q)
            out[i] = r
            for j in range(8):
                if q[j] > maxima[j]:
                    maxima[j] = q[j]
                totals[j] += q[j]
        self._check_viol()
        return 0

    # ---- verification kernels ------------------------------------------------------

    cdef void _build_nxt(self, long long c, long long d) nogil:
        """nxt[x] = smallest x' >= x whose y lies in [c..d] (n+1 if none)."""
        cdef long long x, y
        self.nxt[self.n + 1] = self.n + 1
        for x in range(self.n, 0, -1):
            y = self.ys_by_x[x - 1]
            self.nxt[x] = x if (c <= y <= d) else self.nxt[x + 1]

    cdef long long _verify_one(self, long long a, long long b, long long c, long long d,
                               long long checks, long long sorted_cap,
                               long long[::1] maxima, long long* emitted) nogil:
        """Returns the number of mismatches for this rectangle (nxt prebuilt)."""
        cdef long long bad = 0, j
        cdef long long q[8]
        cdef long long xy, exp_x, exp_y, x, y, w, cnt_r, lc, i, k_or, cap, exp_cnt, got
        # oracle leftmost
        exp_x = self.nxt[a]
        if exp_x > b:
            exp_x = -1
        if checks & 1:  # leftmost
            for j in range(8):
                q[j] = 0
            xy = self._leftmost(a, b, c, d, q)
            if exp_x < 0:
                if xy != -1:
                    bad += 1
            else:
                if xy != ((exp_x << 32) | self.ys_by_x[exp_x - 1]):
                    bad += 1
            for j in range(8):
                if q[j] > maxima[j]:
                    maxima[j] = q[j]
        if checks & 2:  # lowest: oracle via chain walk
            exp_y = self.n + 1
            exp_x = -1
            w = self.nxt[a]
            while w <= b:
                y = self.ys_by_x[w - 1]
                if y < exp_y:
                    exp_y = y
                    exp_x = w
                w = self.nxt[w + 1]
            for j in range(8):
                q[j] = 0
            xy = self._lowest(a, b, c, d, q)
            if exp_x < 0:
                if xy != -1:
                    bad += 1
            elif xy != ((exp_x << 32) | exp_y):
                bad += 1
            for j in range(8):
                if q[j] > maxima[8 + j]:
                    maxima[8 + j] = q[j]
        # oracle count k
        k_or = 0
        w = self.nxt[a]
        while w <= b:
            k_or += 1
            w = self.nxt[w + 1]
        if checks & 4:  # report: set equality + first-emitted extremality per side
            for j in range(8):
                q[j] = 0
            cnt_r = self._report_rect(a, b, c, d, -1, self.ebuf, &lc, q)
            emitted[0] += cnt_r
            if cnt_r != k_or:
                bad += 1
            else:
                self.stamp_ctr += 1
                for i in range(cnt_r):
                    x = self.ebuf[i, 0]
                    y = self.ebuf[i, 1]
                    if not (a <= x <= b and c <= y <= d and self.ys_by_x[x - 1] == y):
                        bad += 1
                        break
                    if self.stamp[x] == self.stamp_ctr:
                        bad += 1  # duplicate emission
                        break
                    self.stamp[x] = self.stamp_ctr
                    if i < lc:
                        if y > self.ebuf[0, 1]:
                            bad += 1  # left side must report its highest first
                            break
                    elif y < self.ebuf[lc, 1]:
                        bad += 1  # right side must report its lowest first
                        break
            for j in range(8):
                if q[j] > maxima[16 + j]:
                    maxima[16 + j] = q[j]
        if checks & 8:  # sorted: must equal the chain prefix
            cap = sorted_cap if sorted_cap >= 0 else -1
            for j in range(8):
                q[j] = 0
            got = self._collect_sorted(a, b, c, d, cap, self.sbuf, q)
            emitted[0] += got
            exp_cnt = k_or if cap < 0 else (k_or if k_or < cap else cap)
            if got != exp_cnt:
                bad += 1
            else:
                w = self.nxt[a]
                for i in range(got):
                    if self.sbuf[i, 0] != w or self.sbuf[i, 1] != self.ys_by_x[w - 1]:
                        bad += 1
                        break
                    w = self.nxt[w + 1]
            for j in range(8):
                if q[j] > maxima[24 + j]:
                    maxima[24 + j] = q[j]
        return bad

    def verify_all_rects(self, long long checks, long long sorted_cap):
        """Exhaustive sweep over every rectangle; oracle = brute chain scans."""
        cdef long long c, d, a, b, mism = 0, queries = 0, emitted = 0
        maxima_arr = np.zeros(32, dtype=np.int64)
        cdef long long[::1] maxima = maxima_arr
        for c in range(1, self.n + 1):
            for d in range(c, self.n + 1):
                self._build_nxt(c, d)
                for a in range(1, self.n + 1):
                    for b in range(a, self.n + 1):
                        queries += 1
                        mism += self._verify_one(a, b, c, d, checks, sorted_cap,
                                                 maxima, &emitted)
        self._check_viol()
        return {
            "queries": int(queries),
            "mismatches": int(mism),
            "emitted": int(emitted),
            "maxima": {
                "leftmost": [int(v) for v in maxima_arr[0:8]],
                "lowest": [int(v) for v in maxima_arr[8:16]],
                "report": [int(v) for v in maxima_arr[16:24]],
                "sorted": [int(v) for v in maxima_arr[24:32]],
            },
        }

    def verify_rects(self, long long[:, ::1] rects, long long checks, long long sorted_cap):
        """Verify an explicit rectangle list (random-rect acceptance sweeps)."""
        cdef long long i, mism = 0, emitted = 0
        cdef long long m = rects.shape[0]
        maxima_arr = np.zeros(32, dtype=np.int64)
        cdef long long[::1] maxima = maxima_arr
        for i in range(m):
            self._build_nxt(rects[i, 2], rects[i, 3])
            mism += self._verify_one(rects[i, 0], rects[i, 1], rects[i, 2], rects[i, 3],
                                     checks, sorted_cap, maxima, &emitted)
        self._check_viol()
        return {
            "queries": int(m),
            "mismatches": int(mism),
            "emitted": int(emitted),
            "maxima": {
                "leftmost": [int(v) for v in maxima_arr[0:8]],
                "lowest": [int(v) for v in maxima_arr[8:16]],
                "report": [int(v) for v in maxima_arr[16:24]],
                "sorted": [int(v) for v in maxima_arr[24:32]],
            },
        }
