"""Greedy set cover over shadow squares."""

from __future__ import annotations

import heapq

from ..core import PointSet, to_fraction
from .lifting import Lifting, SquareCover, validate_cover

__all__ = ["greedy_set_cover", "greedy_cover", "cleanup"]


def greedy_set_cover(masks, keys, universe: int) -> list:
    """Classic greedy set cover on bitmasks.

    Repeatedly takes the set covering the most uncovered elements; ties go
    to the smallest ``keys[k]``.  Uses lazy re-evaluation: gains only shrink,
    so a popped entry whose refreshed gain still beats the heap top wins.

    Returns the chosen set indices in pick order.
    """
    uncovered = universe
    heap = [(-m.bit_count(), keys[k], k) for k, m in enumerate(masks)]
    heapq.heapify(heap)
    chosen = []
    while uncovered:
        if not heap:
            raise ValueError("sets do not cover the universe")
        neg, key, k = heapq.heappop(heap)
        gain = (masks[k] & uncovered).bit_count()
        if gain == 0:
            continue
        if gain != -neg and heap and (-gain, key) > heap[0][:2]:
            heapq.heappush(heap, (-gain, key, k))
            continue
        chosen.append(k)
        uncovered &= ~masks[k]
    return chosen


def greedy_cover(P: PointSet, eps) -> SquareCover:
    """Greedy cover of all grid points by anchored shadow squares.

    Ties are broken by the lexicographically smallest anchor ``(p_i, p_j)``.
    """
    if P.n < 2:
        raise ValueError("need at least two points")
    L = Lifting(P, eps)
    anchors = L.anchors()
    masks = [L.box_mask(L.anchor_box(i, j)) for i, j in anchors]
    picked = greedy_set_cover(masks, anchors, L.full_mask)
    return SquareCover([L.square(*anchors[k]) for k in picked], L.eps)


def cleanup(cover: SquareCover, P: PointSet, eps=None) -> SquareCover:
    """Shrink a valid cover by greedy set cover restricted to its squares."""
    eps = cover.eps if eps is None else to_fraction(eps)
    if eps != cover.eps:
        raise ValueError("eps does not match the cover")
    if not validate_cover(P, cover):
        raise ValueError("input is not a valid cover")
    L = Lifting(P, eps)
    squares = list(dict.fromkeys(cover.squares))
    masks = []
    for s in squares:
        box = L.box(s)
        masks.append(L.box_mask(box) if box is not None else 0)
    keys = [s.anchor for s in squares]
    picked = greedy_set_cover(masks, keys, L.full_mask)
    return SquareCover([squares[k] for k in picked], eps)
