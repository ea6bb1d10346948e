"""Lifting a point set on the line to grid points and shadow squares.

A pair of intervals ``(I, J)`` with ``I < J`` is well separated exactly when
it fits inside the shadow square of its two inner endpoints.  Covering the
pairs of ``P`` by well-separated pairs is therefore the same as covering the
grid points ``(p_i, p_j), i < j`` by shadow squares anchored at grid points.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from ..core import Pair, PairDecomposition, PointSet, to_fraction

__all__ = [
    "GridPoint",
    "ShadowSquare",
    "SquareCover",
    "Lifting",
    "lift",
    "maximal_pairs",
    "covered",
    "vicinity",
    "cover_to_decomposition",
    "validate_cover",
]


@dataclass(frozen=True, order=True)
class GridPoint:
    i: int
    j: int
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if not self.i < self.j or not self.x < self.y:
            raise ValueError("grid point must lie strictly above the diagonal")


@dataclass(frozen=True)
class ShadowSquare:
    """The square ``[a - tau, a] x [b, b + tau]`` with ``tau = eps (b - a)``.

    ``(a, b)`` is the anchor (bottom-right corner).  Its two sides, read as
    intervals on the line, form a 1/eps-well-separated pair.
    """

    a: Fraction
    b: Fraction
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "b", to_fraction(self.b))
        object.__setattr__(self, "eps", to_fraction(self.eps))
        if not self.a < self.b:
            raise ValueError("anchor must lie strictly above the diagonal")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @property
    def anchor(self):
        return (self.a, self.b)

    @property
    def tau(self) -> Fraction:
        return self.eps * (self.b - self.a)

    @property
    def extent(self):
        """``((x1, x2), (y1, y2))`` of the closed square."""
        t = self.tau
        return (self.a - t, self.a), (self.b, self.b + t)

    def contains(self, x, y) -> bool:
        (x1, x2), (y1, y2) = self.extent
        return x1 <= x <= x2 and y1 <= y <= y2

    def to_json(self) -> dict:
        return {"anchor": [str(self.a), str(self.b)], "tau": str(self.tau)}


@dataclass(frozen=True)
class SquareCover:
    squares: tuple
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "squares", tuple(self.squares))
        object.__setattr__(self, "eps", to_fraction(self.eps))

    def __len__(self) -> int:
        return len(self.squares)


def _check_line(P: PointSet):
    if not P.exact or P.dim != 1:
        raise ValueError("expected an exact point set on the line")


class Lifting:
    """Index bookkeeping for the grid ``P x P`` above the diagonal.

    Grid point ``(i, j)`` has element id ``i*(2n-i-1)//2 + (j-i-1)``, which
    enumerates grid points in lexicographic order.  Every shadow square is
    reduced to the index box ``[xlo..xhi] x [ylo..yhi]`` of grid points it
    contains; such a box never reaches the diagonal, so every index pair in
    it is a grid point.
    """

    def __init__(self, P: PointSet, eps):
        _check_line(P)
        self.P = P
        self.coords = P.coords
        self.n = P.n
        self.eps = to_fraction(eps)
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        self.N = self.n * (self.n - 1) // 2
        self._row_start = [i * (2 * self.n - i - 1) // 2 - i - 1 for i in range(self.n)]
        self._mask_cache = {}

    def element(self, i: int, j: int) -> int:
        return self._row_start[i] + j

    def unelement(self, e: int):
        for i in range(self.n - 1):
            if self._row_start[i] + i + 1 <= e <= self._row_start[i] + self.n - 1:
                return i, e - self._row_start[i]
        raise IndexError(e)

    def square(self, i: int, j: int) -> ShadowSquare:
        return ShadowSquare(self.coords[i], self.coords[j], self.eps)

    def box(self, square: ShadowSquare):
        """Index box of the grid points inside ``square`` (or None if empty)."""
        (x1, x2), (y1, y2) = square.extent
        c = self.coords
        xlo = bisect_left(c, x1)
        xhi = bisect_right(c, x2) - 1
        ylo = bisect_left(c, y1)
        yhi = bisect_right(c, y2) - 1
        if xlo > xhi or ylo > yhi:
            return None
        return xlo, xhi, ylo, yhi

    def anchor_box(self, i: int, j: int):
        """Index box of the shadow square anchored at grid point ``(i, j)``."""
        c = self.coords
        t = self.eps * (c[j] - c[i])
        return bisect_left(c, c[i] - t), i, j, bisect_right(c, c[j] + t) - 1

    @staticmethod
    def box_size(box) -> int:
        xlo, xhi, ylo, yhi = box
        return (xhi - xlo + 1) * (yhi - ylo + 1)

    def box_mask(self, box) -> int:
        """Bitmask (over element ids) of the grid points in ``box``."""
        xlo, xhi, ylo, yhi = box
        width = (1 << (yhi - ylo + 1)) - 1
        m = 0
        for r in range(xlo, xhi + 1):
            m |= width << self.element(r, ylo)
        return m

    def anchor_mask(self, i: int, j: int) -> int:
        key = (i, j)
        m = self._mask_cache.get(key)
        if m is None:
            m = self._mask_cache[key] = self.box_mask(self.anchor_box(i, j))
        return m

    def vicinity_mask(self, i: int, j: int) -> int:
        """Bitmask of the grid points sharing an anchored square with ``(i, j)``.

        An anchor ``(a, b)`` holds ``(x, y)`` iff ``a >= x``, ``b <= y`` and
        ``b`` is at least ``((1+eps) p_a - x) / eps`` and
        ``(y + eps p_a) / (1+eps)``, so for each ``a`` the valid ``b`` form a
        contiguous index range.
        """
        c, eps = self.coords, self.eps
        x, y = c[i], c[j]
        out = 0
        for a in range(i, j):
            pa = c[a]
            low = max((pa * (1 + eps) - x) / eps, (y + eps * pa) / (1 + eps))
            for b in range(max(bisect_left(c, low), a + 1), j + 1):
                out |= self.anchor_mask(a, b)
        return out

    @property
    def full_mask(self) -> int:
        return (1 << self.N) - 1

    def anchors(self):
        n = self.n
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    def anchor_of(self, square: ShadowSquare):
        """Index pair of the square's anchor, when the anchor is a grid point."""
        i = bisect_left(self.coords, square.a)
        j = bisect_left(self.coords, square.b)
        if (i < self.n and j < self.n and self.coords[i] == square.a
                and self.coords[j] == square.b):
            return i, j
        return None


def lift(P: PointSet) -> list:
    """All ``C(n, 2)`` grid points ``(p_i, p_j), i < j`` in lexicographic order."""
    _check_line(P)
    c = P.coords
    return [GridPoint(i, j, c[i], c[j]) for i in range(P.n) for j in range(i + 1, P.n)]


def maximal_pairs(P: PointSet, eps) -> list:
    """One shadow square per grid point anchor."""
    _check_line(P)
    eps = to_fraction(eps)
    return [ShadowSquare(g.x, g.y, eps) for g in lift(P)]


def covered(square: ShadowSquare, Q) -> set:
    """Grid points of ``Q`` inside the closed square, as ``(i, j)`` tuples."""
    return {(g.i, g.j) for g in Q if square.contains(g.x, g.y)}


def vicinity(p: GridPoint, eps, Q) -> set:
    """Grid points sharing some anchored shadow square with ``p``.

    Anchors are restricted to ``Q``: if a square anchored anywhere holds both
    ``p`` and ``p'``, so does the one anchored at the larger first
    coordinate and the smaller second coordinate of the two, which is again
    a grid point.
    """
    eps = to_fraction(eps)
    out = set()
    for r in Q:
        s = ShadowSquare(r.x, r.y, eps)
        if s.contains(p.x, p.y):
            out |= covered(s, Q)
    return out


def cover_to_decomposition(P: PointSet, cover: SquareCover) -> PairDecomposition:
    """Read every square as the pair ``(P in x-side, P in y-side)``."""
    L = Lifting(P, cover.eps)
    pairs = []
    for s in cover.squares:
        box = L.box(s)
        if box is None:
            continue
        xlo, xhi, ylo, yhi = box
        pairs.append(Pair(tuple(range(xlo, xhi + 1)), tuple(range(ylo, yhi + 1))))
    return PairDecomposition(pairs, cover.eps, kind="wspd", coverage="cover")


def validate_cover(P: PointSet, cover: SquareCover) -> bool:
    """True when every grid point lies in at least one square of ``cover``."""
    L = Lifting(P, cover.eps)
    seen = 0
    for s in cover.squares:
        box = L.box(s)
        if box is not None:
            seen |= L.box_mask(box)
    return seen == L.full_mask
