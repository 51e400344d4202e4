"""Static range structure answering one-sided segment sweeping queries.

A balanced segment tree over the x-sorted points stores the upper hull of
every node range.  A query decomposes the strip's strict interior into
O(log n) covering nodes; in each, the hull vertex whose adjacent slopes
bracket the query slope maximizes y - slope*x over the whole range, so one
vertex test per node decides it.  Space O(n log n), query O(log^2 n).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Dict, List, Sequence, Tuple

from .geometry import QuerySegment
from .metric import InvalidInputError, Point

_LEAF_SIZE = 8


class HullTree:
    """Immutable after build; concurrent queries are safe."""

    def __init__(self, points: Sequence[Point]):
        n = len(points)
        for i in range(1, n):
            if points[i - 1] >= points[i]:
                raise InvalidInputError(
                    "points must be sorted by (x, y) and pairwise distinct"
                )
        self.leaves: Tuple[Point, ...] = tuple(points)
        self.xs: List[float] = [pt.x for pt in points]
        self.ys: List[float] = [pt.y for pt in points]
        # node id -> (hull xs, hull ys, ascending negated chain slopes)
        self._nodes: Dict[int, Tuple[List[float], List[float], List[float]]] = {}
        self.total_node_vertices = 0
        if n:
            self._build(1, 0, n)

    def _build(self, node: int, lo: int, hi: int) -> None:
        hx: List[float] = []
        hy: List[float] = []
        xs, ys = self.xs, self.ys
        for i in range(lo, hi):
            x, y = xs[i], ys[i]
            if hx and hx[-1] == x:
                if y <= hy[-1]:
                    continue
                hx.pop()
                hy.pop()
            while len(hx) >= 2 and (y - hy[-1]) * (hx[-1] - hx[-2]) >= (
                hy[-1] - hy[-2]
            ) * (x - hx[-1]):
                hx.pop()
                hy.pop()
            hx.append(x)
            hy.append(y)
        negs = [
            -(hy[i + 1] - hy[i]) / (hx[i + 1] - hx[i]) for i in range(len(hx) - 1)
        ]
        self._nodes[node] = (hx, hy, negs)
        self.total_node_vertices += len(hx)
        if hi - lo > _LEAF_SIZE:
            mid = (lo + hi) // 2
            self._build(2 * node, lo, mid)
            self._build(2 * node + 1, mid, hi)

    def _node_above(self, node: int, slope: float, intercept: float) -> bool:
        hx, hy, negs = self._nodes[node]
        i = bisect_left(negs, -slope)
        return hy[i] - slope * hx[i] > intercept

    def any_point_above(self, seg: QuerySegment) -> bool:
        """True iff a stored point with x strictly inside (seg.start.x,
        seg.end.x) lies strictly above the segment's supporting line."""
        n = len(self.leaves)
        if n == 0 or seg.start == seg.end:
            return False
        ql = bisect_right(self.xs, seg.start.x)
        qr = bisect_left(self.xs, seg.end.x)
        if ql >= qr:
            return False
        slope = seg.slope
        intercept = seg.start.y - slope * seg.start.x
        stack = [(1, 0, n)]
        while stack:
            node, lo, hi = stack.pop()
            if qr <= lo or hi <= ql:
                continue
            if ql <= lo and hi <= qr:
                if self._node_above(node, slope, intercept):
                    return True
                continue
            if hi - lo <= _LEAF_SIZE:
                ys, xs = self.ys, self.xs
                for i in range(max(lo, ql), min(hi, qr)):
                    if ys[i] - slope * xs[i] > intercept:
                        return True
                continue
            mid = (lo + hi) // 2
            stack.append((2 * node, lo, mid))
            stack.append((2 * node + 1, mid, hi))
        return False


def build(points: Sequence[Point]) -> HullTree:
    """Hull tree over the x-sorted, duplicate-free point sequence."""
    return HullTree(points)


def any_point_above(t: HullTree, seg: QuerySegment) -> bool:
    return t.any_point_above(seg)
