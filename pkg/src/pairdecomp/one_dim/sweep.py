"""Right-to-left sweep computing a cover within three times the optimum.

The plane is oriented with ``p_i`` horizontal and ``p_j`` vertical.  Shadow
squares extend to the left of and above their anchor, so the sweep visits
columns (fixed ``p_i``) in decreasing order; a square is live from its right
edge until the sweep passes its left edge.  Inside a column the status is a
segment tree over the ``p_j`` indices counting live vertical intervals.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right

from ..core import PointSet
from .lifting import Lifting, SquareCover

__all__ = ["CoverSegmentTree", "sweep3_cover"]


class CoverSegmentTree:
    """Counted interval cover over leaves ``0..size-1``.

    ``cnt[v]`` counts intervals stored at node ``v`` (covering its whole
    range); ``full[v]`` is true when every leaf under ``v`` is covered.
    Insert and delete are O(log n); :meth:`first_uncovered` descends
    left-first through non-full nodes.
    """

    def __init__(self, size: int):
        self.size = size
        m = 1
        while m < max(size, 1):
            m *= 2
        self._cap = m
        self.cnt = [0] * (2 * m)
        self.full = [False] * (2 * m)
        # padding leaves beyond ``size`` are permanently covered
        for leaf in range(size, m):
            self.full[m + leaf] = True
            self.cnt[m + leaf] = 1
        for v in range(m - 1, 0, -1):
            self.full[v] = self.full[2 * v] and self.full[2 * v + 1]

    def _update(self, lo, hi, delta, v, vlo, vhi):
        if hi < vlo or vhi < lo:
            return
        if lo <= vlo and vhi <= hi:
            self.cnt[v] += delta
        else:
            mid = (vlo + vhi) // 2
            self._update(lo, hi, delta, 2 * v, vlo, mid)
            self._update(lo, hi, delta, 2 * v + 1, mid + 1, vhi)
        if self.cnt[v] > 0:
            self.full[v] = True
        elif v >= self._cap:
            self.full[v] = False
        else:
            self.full[v] = self.full[2 * v] and self.full[2 * v + 1]

    def insert(self, lo: int, hi: int):
        if lo <= hi:
            self._update(lo, hi, 1, 1, 0, self._cap - 1)

    def delete(self, lo: int, hi: int):
        if lo <= hi:
            self._update(lo, hi, -1, 1, 0, self._cap - 1)

    def first_uncovered(self):
        """Smallest uncovered leaf, or None."""
        v = 1
        if self.full[v]:
            return None
        while v < self._cap:
            v = 2 * v if not self.full[2 * v] else 2 * v + 1
        return v - self._cap

    def covered(self, leaf: int) -> bool:
        v = leaf + self._cap
        while v:
            if self.cnt[v] > 0:
                return True
            v //= 2
        return False


def _three_squares(L: Lifting, c: int, j: int):
    """Anchors ``(sigma(p), S, sigma(q))`` for the grid point ``p = (c, j)``.

    ``S`` has ``p`` as its top-right corner and ``q`` is the bottom-left
    corner of ``S``.  Neither is anchored on the grid in general, so the
    anchor of ``S`` is raised to the next point value and that of
    ``sigma(q)`` is raised and moved left to the previous point value; both
    moves only add grid points to the square.  ``sigma(q)`` is None when no
    point lies left of ``q``.
    """
    coords, eps = L.coords, L.eps
    x, y = coords[c], coords[j]
    # b + eps (b - x) = y
    b = (y + eps * x) / (1 + eps)
    j2 = bisect_left(coords, b)
    i3 = bisect_right(coords, x - eps * (b - x)) - 1
    return (c, j), (c, j2), ((i3, j2) if i3 >= 0 else None)


def sweep3_cover(P: PointSet, eps) -> SquareCover:
    """Cover all grid points by sweeping columns right to left.

    For each uncovered grid point ``p`` found bottom-up in the current
    column, adds its shadow, then the square ``S`` with ``p`` as top-right
    corner and the shadow of the bottom-left corner of ``S``.  The last two
    are added only when they contain a grid point of the vicinity of ``p``
    that is still uncovered.  Afterwards the part of the vicinity left of
    the sweep line is covered, so the result is within 3x optimal.
    """
    if P.n < 2:
        raise ValueError("need at least two points")
    L = Lifting(P, eps)
    n = L.n
    tree = CoverSegmentTree(n)
    chosen = {}
    union = 0  # grid points covered by chosen squares, live or pending
    pending = []  # (-xhi, anchor): squares whose right edge is left of the sweep
    live = []  # (-xlo, anchor, ylo, yhi): delete once the sweep passes xlo
    block = None

    def activate(anchor):
        xlo, xhi, ylo, yhi = L.anchor_box(*anchor)
        tree.insert(ylo, yhi)
        heapq.heappush(live, (-xlo, anchor, ylo, yhi))

    def choose(anchor):
        nonlocal union
        chosen[anchor] = None
        union |= L.anchor_mask(*anchor)
        if anchor[0] == c:
            activate(anchor)
        else:
            heapq.heappush(pending, (-anchor[0], anchor))

    for c in range(n - 2, -1, -1):
        while live and -live[0][0] > c:
            _, _, ylo, yhi = heapq.heappop(live)
            tree.delete(ylo, yhi)
        while pending and -pending[0][0] >= c:
            _, anchor = heapq.heappop(pending)
            activate(anchor)
        # mask the diagonal and below for this column
        tree.insert(0, c)
        if block is not None:
            tree.delete(0, block)
        block = c

        while (j := tree.first_uncovered()) is not None:
            sigma_p, s, sigma_q = _three_squares(L, c, j)
            choose(sigma_p)
            near = None
            for anchor in (s, sigma_q):
                if anchor is None or anchor in chosen:
                    continue
                if near is None:
                    near = L.vicinity_mask(c, j)
                if L.anchor_mask(*anchor) & near & ~union:
                    choose(anchor)

    return SquareCover([L.square(i, j) for i, j in chosen], L.eps)
