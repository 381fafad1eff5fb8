"""Brute-force reference answers; the ground truth for every query type."""

from __future__ import annotations

import numpy as np

from .model import Point, PointSet, Rect


def _mask(ps: PointSet, rect: Rect) -> np.ndarray:
    xs = np.arange(1, ps.n + 1)
    ys = ps.ys_by_x
    return (xs >= rect.a) & (xs <= rect.b) & (ys >= rect.c) & (ys <= rect.d)


def oracle_leftmost(ps: PointSet, rect: Rect | None) -> Point | None:
    """Linear scan in x order; first point inside the rectangle."""
    if rect is None or ps.n == 0:
        return None
    hits = np.nonzero(_mask(ps, rect))[0]
    if len(hits) == 0:
        return None
    x = int(hits[0]) + 1
    return Point(x, int(ps.ys_by_x[x - 1]))


def oracle_lowest(ps: PointSet, rect: Rect | None) -> Point | None:
    """Scan; minimum-y point inside the rectangle."""
    if rect is None or ps.n == 0:
        return None
    m = _mask(ps, rect)
    if not m.any():
        return None
    ys = np.where(m, ps.ys_by_x, np.iinfo(np.int32).max)
    x = int(np.argmin(ys)) + 1
    return Point(x, int(ps.ys_by_x[x - 1]))


def oracle_report_sorted(ps: PointSet, rect: Rect | None, k=None) -> list[Point]:
    """Scan, filter, sort by x, truncate to k (None = all)."""
    if rect is None or ps.n == 0 or (k is not None and k <= 0):
        return []
    hits = np.nonzero(_mask(ps, rect))[0]
    if k is not None:
        hits = hits[:k]
    return [Point(int(x) + 1, int(ps.ys_by_x[x])) for x in hits]


def oracle_report_set(ps: PointSet, rect: Rect | None) -> set[tuple[int, int]]:
    """The unordered oracle answer for 4-sided reporting."""
    return {p.astuple() for p in oracle_report_sorted(ps, rect)}
