"""Online sorted range reporting by repeated range successor queries.

A cursor holds the rectangle and the x rank just past the last reported
point; each `next` issues exactly one successor query on the shrunk
rectangle. Opening is lazy: no query runs until the first `next`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Point, QueryStats, Rect, Space


@dataclass
class Cursor:
    rect: Rect | None  # None when opened on an already-empty rectangle
    index: object
    stats: QueryStats = field(default_factory=QueryStats)
    next_a: int = 0
    exhausted: bool = False

    def __post_init__(self):
        if self.rect is None:
            self.exhausted = True
        else:
            self.next_a = self.rect.a

    def __iter__(self):
        return self

    def __next__(self) -> Point:
        p = next_point(self)
        if p is None:
            raise StopIteration
        return p


def open_sorted(index, rect: Rect | None) -> Cursor:
    """Position a cursor before the leftmost point; issues no query yet."""
    if rect is not None and rect.space is Space.ORIGINAL:
        rect = index.to_rank_rect(rect)
    if rect is not None:
        rect.validate_rank(index.n)
    return Cursor(rect, index)


def next_point(cur: Cursor) -> Point | None:
    """Next point in strictly increasing x; None once the range is drained."""
    if cur.exhausted:
        return None
    r = cur.rect
    cur.stats.successor_calls += 1
    hit = cur.index.leftmost_in_rect_rank(
        Rect(cur.next_a, r.b, r.c, r.d), cur.stats
    )
    if hit is None:
        cur.exhausted = True
        return None
    if hit.x >= r.b:
        cur.exhausted = True  # nothing can follow the right edge
    else:
        cur.next_a = hit.x + 1
    return hit


def collect_sorted(index, rect: Rect | None, k=None) -> list[Point]:
    """First min(k, |S ∩ Q|) points in increasing x (k=None drains the range)."""
    cur = open_sorted(index, rect)
    out: list[Point] = []
    while k is None or len(out) < k:
        p = next_point(cur)
        if p is None:
            break
        out.append(p)
    return out


def open_sorted_by_y(index, rect: Rect | None) -> "YCursor":
    """Cross-validation twin: increasing-y iteration via the baseline query."""
    if rect is not None and rect.space is Space.ORIGINAL:
        rect = index.to_rank_rect(rect)
    if rect is not None:
        rect.validate_rank(index.n)
    return YCursor(rect, index)


@dataclass
class YCursor:
    rect: Rect | None
    index: object
    stats: QueryStats = field(default_factory=QueryStats)
    next_c: int = 0
    exhausted: bool = False

    def __post_init__(self):
        if self.rect is None:
            self.exhausted = True
        else:
            self.next_c = self.rect.c

    def next(self) -> Point | None:
        if self.exhausted:
            return None
        r = self.rect
        self.stats.successor_calls += 1
        hit = self.index.lowest_in_rect_rank(
            Rect(r.a, r.b, self.next_c, r.d), self.stats
        )
        if hit is None:
            self.exhausted = True
            return None
        if hit.y >= r.d:
            self.exhausted = True
        else:
            self.next_c = hit.y + 1
        return hit
