"""Callahan-Kosaraju WSPD on the line via a fair split tree."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Pair, PairDecomposition, PointSet, to_fraction
from .lifting import _check_line

__all__ = ["SplitNode", "fair_split_tree", "ck_wspd_1d"]


@dataclass
class SplitNode:
    lo: int  # first point index
    hi: int  # last point index (inclusive)
    left: "SplitNode | None" = None
    right: "SplitNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def fair_split_tree(P: PointSet) -> SplitNode:
    """Split the bounding interval at its midpoint until single points remain.

    Points equal to the midpoint go to the left child.
    """
    _check_line(P)
    c = P.coords

    def build(lo, hi):
        node = SplitNode(lo, hi)
        if lo == hi:
            return node
        mid = (c[lo] + c[hi]) / 2
        k = lo
        while c[k + 1] <= mid:
            k += 1
        node.left = build(lo, k)
        node.right = build(k + 1, hi)
        return node

    # explicit stack would be needed only for extreme spreads; depth <= n
    return build(0, P.n - 1)


def ck_wspd_1d(P: PointSet, eps) -> PairDecomposition:
    """Partition 1/eps-WSPD from the fair split tree.

    For every internal node the pair (left, right) is refined: a pair of
    nodes is emitted once ``max(len_u, len_v) <= eps * gap`` holds for their
    bounding intervals, otherwise the node with the longer interval (the
    first one on ties) is replaced by its children.
    """
    if P.n < 2:
        raise ValueError("need at least two points")
    eps = to_fraction(eps)
    c = P.coords
    root = fair_split_tree(P)

    def length(u):
        return c[u.hi] - c[u.lo]

    pairs = []
    stack = []
    internal = [root]
    while internal:
        u = internal.pop()
        if u.is_leaf:
            continue
        stack.append((u.left, u.right))
        internal.extend((u.right, u.left))
        # refine this node's pair before moving on keeps output order stable
        while stack:
            v, w = stack.pop()
            lv, lw = length(v), length(w)
            gap = c[w.lo] - c[v.hi] if v.hi < w.lo else c[v.lo] - c[w.hi]
            if max(lv, lw) <= eps * gap:
                pairs.append(Pair(tuple(range(v.lo, v.hi + 1)), tuple(range(w.lo, w.hi + 1))))
            elif lv >= lw:
                stack.append((v.right, w))
                stack.append((v.left, w))
            else:
                stack.append((v, w.right))
                stack.append((v, w.left))
    return PairDecomposition(pairs, eps, kind="wspd", coverage="partition")
