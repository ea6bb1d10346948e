"""
Covering pairs on the line
==========================

Points on the line, their pairs lifted to grid points, and the three ways
of covering those grid points with shadow squares.
"""

from pairdecomp import PointSet, exact_min_cover, greedy_cover, sweep3_cover, cleanup, validate
from pairdecomp.one_dim import ck_wspd_1d, cover_to_decomposition, lift, maximal_pairs

##############################################################################
# The lifting
# -----------
#
# Every pair ``p_i < p_j`` becomes the grid point ``(p_i, p_j)`` above the
# diagonal.  A well-separated pair of intervals fits inside the shadow
# square anchored at its two inner endpoints, so a WSPD is a cover of the
# grid points by such squares.

P = PointSet.line(range(1, 11))
Q = lift(P)
squares = maximal_pairs(P, 1)
print(f"{P.n} points, {len(Q)} grid points, {len(squares)} candidate squares")
(x1, x2), (y1, y2) = squares[[(g.x, g.y) for g in Q].index((3, 7))].extent
print(f"square at anchor (3, 7): [{x1}, {x2}] x [{y1}, {y2}]")

##############################################################################
# Four covers
# -----------
#
# Greedy set cover, the sweep-line 3-approximation, the sweep followed by a
# greedy clean-up, and the exact optimum from branch and bound.

covers = {
    "greedy": greedy_cover(P, 1),
    "aprx3": sweep3_cover(P, 1),
}
covers["aprx3c"] = cleanup(covers["aprx3"], P)
covers["exact"] = exact_min_cover(P, 1).cover
for name, cover in covers.items():
    rep = validate(P, cover_to_decomposition(P, cover))
    print(f"{name:7s} {len(cover):3d} squares  valid={rep.ok}  histogram={rep.multiplicity_histogram}")

##############################################################################
# The classic construction, for comparison: a fair split tree and the
# usual pair-finding recursion.

W = ck_wspd_1d(P, 1)
print(f"fair split tree WSPD: {W.size} pairs")

##############################################################################
# Smaller eps means more separation and more pairs.

for eps in ("2", "1", "1/2", "1/4"):
    print(f"eps={eps:4s} exact={exact_min_cover(P, eps).size:3d}  greedy={len(greedy_cover(P, eps)):3d}")
