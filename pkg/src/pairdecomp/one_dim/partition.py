"""From a cover by squares to a partition WSPD.

Squares are inserted largest first.  The part of each square not already in
the union is cut into the rectangles of its vertical decomposition, which
gives at most nine rectangles per square.  Each rectangle lies inside the
square that produced it, so it still describes a well-separated pair.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from ..core import Pair, PairDecomposition, PointSet, to_fraction
from .lifting import Lifting, ShadowSquare, SquareCover, _check_line

__all__ = [
    "Rect",
    "RectanglePartition",
    "squares_to_rectangles",
    "rectangles_to_partition",
    "snap_to_grid",
    "cover_to_partition",
]


@dataclass(frozen=True)
class Rect:
    x1: Fraction
    x2: Fraction
    y1: Fraction
    y2: Fraction
    source: int = -1

    @property
    def area(self) -> Fraction:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def inside(self, box) -> bool:
        x1, x2, y1, y2 = box
        return x1 <= self.x1 and self.x2 <= x2 and y1 <= self.y1 and self.y2 <= y2


@dataclass(frozen=True)
class RectanglePartition:
    """Interior-disjoint rectangles, each tagged with a source box index.

    Grid points are assigned with half-open ``[x1, x2) x [y1, y2)``
    semantics, optionally closed on the largest ``x2`` and ``y2``.
    """

    rects: tuple
    sources: tuple = ()

    def __len__(self) -> int:
        return len(self.rects)


def _as_box(s):
    if isinstance(s, ShadowSquare):
        (x1, x2), (y1, y2) = s.extent
        return x1, x2, y1, y2
    x1, x2, y1, y2 = (to_fraction(v) for v in s)
    if not (x1 < x2 and y1 < y2):
        raise ValueError(f"degenerate box {s!r}")
    return x1, x2, y1, y2


def _order_key(k, box):
    x1, x2, y1, y2 = box
    # largest first; equal sizes by anchor (bottom-right corner) lexicographically
    return (-max(x2 - x1, y2 - y1), x2, y1, k)


def _free_intervals(lo, hi, blocks):
    """Parts of ``[lo, hi]`` not covered by the intervals in ``blocks``."""
    out = []
    cur = lo
    for b1, b2 in sorted(blocks):
        if b2 <= cur:
            continue
        if b1 >= hi:
            break
        if b1 > cur:
            out.append((cur, b1))
        cur = max(cur, b2)
        if cur >= hi:
            break
    if cur < hi:
        out.append((cur, hi))
    return out


def squares_to_rectangles(squares) -> RectanglePartition:
    """Vertical decomposition of the union, built one square at a time.

    ``squares`` holds :class:`ShadowSquare` objects or ``(x1, x2, y1, y2)``
    boxes.  Rectangles are tagged with the index of their source in the
    input list.  Exact rational arithmetic throughout.
    """
    boxes = [_as_box(s) for s in squares]
    if not boxes:
        raise ValueError("need at least one square")
    order = sorted(range(len(boxes)), key=lambda k: _order_key(k, boxes[k]))
    done = []
    out = []
    for k in order:
        sx1, sx2, sy1, sy2 = boxes[k]
        earlier = [b for b in done
                   if b[0] < sx2 and sx1 < b[1] and b[2] < sy2 and sy1 < b[3]]
        xs = sorted({sx1, sx2} | {v for b in earlier for v in (b[0], b[1]) if sx1 < v < sx2})
        open_rects = {}  # (y1, y2) -> x where the rectangle started
        for xa, xb in zip(xs, xs[1:]):
            blocks = [(b[2], b[3]) for b in earlier if b[0] <= xa and xb <= b[1]]
            free = set(_free_intervals(sy1, sy2, blocks))
            for iv in list(open_rects):
                if iv not in free:
                    out.append(Rect(open_rects.pop(iv), xa, iv[0], iv[1], k))
            for iv in sorted(free):
                open_rects.setdefault(iv, xa)
        for iv, x0 in sorted(open_rects.items()):
            out.append(Rect(x0, sx2, iv[0], iv[1], k))
        done.append(boxes[k])
    return RectanglePartition(tuple(out), tuple(boxes))


def rectangles_to_partition(P: PointSet, eps, part: RectanglePartition,
                            closed_top: bool = True) -> PairDecomposition:
    """Read each rectangle as the pair (points in its x-range, points in its y-range).

    With ``closed_top`` the largest ``x2`` and ``y2`` edges are closed, so
    rectangles of a union whose boundary passes through points still claim
    them.  Grid-snapped boxes (see :func:`snap_to_grid`) already end past
    their last point and need ``closed_top=False``.

    Raises ``RuntimeError`` if some grid point is claimed by no rectangle or
    by more than one: the rectangles must tile the covered grid points under
    the half-open convention.
    """
    _check_line(P)
    eps = to_fraction(eps)
    c = P.coords
    L = Lifting(P, eps)
    xmax = max(r.x2 for r in part.rects)
    ymax = max(r.y2 for r in part.rects)

    def index_range(a, b, top):
        # [lo, hi) in index space; the global top edge is closed
        return bisect_left(c, a), (bisect_right(c, b) if closed_top and b == top else bisect_left(c, b))

    pairs = []
    claimed = 0
    for r in part.rects:
        xlo, xhi = index_range(r.x1, r.x2, xmax)
        ylo, yhi = index_range(r.y1, r.y2, ymax)
        if xlo >= xhi or ylo >= yhi:
            continue
        if xhi - 1 >= ylo:
            raise RuntimeError(f"rectangle {r} reaches the diagonal")
        m = L.box_mask((xlo, xhi - 1, ylo, yhi - 1))
        if claimed & m:
            raise RuntimeError(f"rectangle {r} claims grid points twice")
        claimed |= m
        pairs.append(Pair(tuple(range(xlo, xhi)), tuple(range(ylo, yhi))))
    if claimed != L.full_mask:
        missing = L.unelement((L.full_mask & ~claimed).bit_length() - 1)
        raise RuntimeError(f"grid point {missing} not claimed by any rectangle")
    return PairDecomposition(pairs, eps, kind="wspd", coverage="partition")


def snap_to_grid(P: PointSet, cover: SquareCover) -> list:
    """Replace each square by the half-open box spanning exactly its grid points.

    The box of a square holding grid columns ``xlo..xhi`` and rows
    ``ylo..yhi`` is ``[p_xlo, p_{xhi+1}) x [p_ylo, p_{yhi+1})``, with a
    sentinel one unit past the last point.  Squares holding no grid point
    are dropped.
    """
    L = Lifting(P, cover.eps)
    c = list(P.coords) + [P.coords[-1] + 1]
    boxes = []
    for s in cover.squares:
        box = L.box(s)
        if box is None:
            continue
        xlo, xhi, ylo, yhi = box
        boxes.append((c[xlo], c[xhi + 1], c[ylo], c[yhi + 1]))
    return boxes


def cover_to_partition(P: PointSet, cover: SquareCover) -> PairDecomposition:
    """Partition 1/eps-WSPD from a cover: snap, decompose, read off pairs."""
    part = squares_to_rectangles(snap_to_grid(P, cover))
    return rectangles_to_partition(P, cover.eps, part, closed_top=False)
