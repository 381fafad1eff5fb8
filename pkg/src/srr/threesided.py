"""Per-node 3-sided queries: emptiness, the RMQ-recursion reporter, 4-sided reporting.

A half-plane query fixes an x interval inside one node and keeps only points
below (`BELOW`, y <= d) or above (`ABOVE`, y >= c) a threshold. Reporting pops
the extreme-y position of the current interval off a range-min/max index,
verifies it through ball inheritance, emits it, and recurses on both sides;
the first emitted point is therefore the extreme one.
"""

from __future__ import annotations

from .model import Point, QueryStats, Rect
from .rmq import MAX, MIN, PackedArgopt
from .wavetree import NodeRef, RangeTree

BELOW = "BELOW"
ABOVE = "ABOVE"


class NodeRmqBundle:
    """Min- and max-sense argopt over every node's y sequence.

    Stored as one packed index per level and sense (node segments never
    overlap, and queries never cross a segment), addressed per node.
    """

    def __init__(self, tree: RangeTree):
        self.tree = tree
        L = tree.L
        keys = [tree.level_y[lev] for lev in range(L + 1)]
        keys += [-tree.level_y[lev] for lev in range(L + 1)]
        self.packed = PackedArgopt(keys)

    def argopt_node(self, v: NodeRef, i: int, j: int, sense: str, stats: QueryStats) -> int:
        """Node-local position of the extreme y in S(v)[i..j]."""
        off = self.tree.node_offset(v)
        inst = v.level if sense == MIN else (self.tree.L + 1) + v.level
        stats.rmq_probes += 1
        return self.packed.query(inst, off + i - 1, off + j - 1) - off + 1

    def size_bits(self) -> int:
        return self.packed.size_bits()


def build_bundle(tree: RangeTree) -> NodeRmqBundle:
    return NodeRmqBundle(tree)


def emptiness(t, bundle, v, a, b, threshold, sense, stats) -> bool:
    """True iff S(v) has no point with x in [a..b] on the given side of threshold."""
    stats.emptiness_queries += 1
    nr = t.noderange(v, a, b, stats)
    if nr is None:
        return True
    i, j = nr
    if sense == BELOW:
        p = bundle.argopt_node(v, i, j, MIN, stats)
        return t.resolve_point(v, p, stats).y > threshold
    p = bundle.argopt_node(v, i, j, MAX, stats)
    return t.resolve_point(v, p, stats).y < threshold


def report_halfplane(t, bundle, v, a_v, b_v, threshold, sense, emit, limit, stats) -> int:
    """Emit every point of S(v)[a_v..b_v] on the threshold's side; extreme first.

    The subrange left of each reported position is drained before the right
    one, so with a limit the emitted prefix is deterministic. limit=None means
    unbounded; the count of emitted points is returned.
    """
    if limit is not None and limit <= 0:
        return 0
    below = sense == BELOW
    count = 0
    stack = [(a_v, b_v)]
    while stack:
        i, j = stack.pop()
        p = bundle.argopt_node(v, i, j, MIN if below else MAX, stats)
        pt = t.resolve_point(v, p, stats)
        if (pt.y > threshold) if below else (pt.y < threshold):
            continue
        emit(pt)
        count += 1
        if limit is not None and count >= limit:
            break
        if p + 1 <= j:
            stack.append((p + 1, j))
        if i <= p - 1:
            stack.append((i, p - 1))
    return count


def report_rect(t, bundle, rect: Rect, emit, limit, stats) -> int:
    """4-sided reporting: LCA split into one half-plane query per child."""
    rect.validate_rank(t.n)
    if limit is not None and limit <= 0:
        return 0
    v = t.lca_node(rect.c, rect.d)
    if v.level == t.L:
        x = int(t.xs_by_y[rect.c - 1])
        if rect.a <= x <= rect.b:
            emit(Point(x, rect.c))
            return 1
        return 0
    vl, vr = t.children(v)
    count = 0
    nr = t.noderange(vl, rect.a, rect.b, stats)
    if nr is not None:
        count += report_halfplane(
            t, bundle, vl, nr[0], nr[1], rect.c, ABOVE, emit, limit, stats
        )
    if limit is not None and count >= limit:
        return count
    nr = t.noderange(vr, rect.a, rect.b, stats)
    if nr is not None:
        rem = None if limit is None else limit - count
        count += report_halfplane(
            t, bundle, vr, nr[0], nr[1], rect.d, BELOW, emit, rem, stats
        )
    return count
