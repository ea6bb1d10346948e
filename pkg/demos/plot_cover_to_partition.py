"""
From a cover to a partition
===========================

A cover may count a pair of points several times.  Cutting the union of the
squares into rectangles, largest square first, yields a WSPD that covers
every pair exactly once.
"""

import sys
from pathlib import Path

from pairdecomp import PointSet, exact_min_cover, render_svg, validate
from pairdecomp.one_dim import (
    cover_to_decomposition,
    rectangles_to_partition,
    snap_to_grid,
    squares_to_rectangles,
)

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")

##############################################################################
# The two-square picture
# ----------------------
#
# ``[0,2]^2`` first, then ``[1,3]^2``: the second square only adds an
# L-shaped region, which splits into two rectangles.

part = squares_to_rectangles([(0, 2, 0, 2), (1, 3, 1, 3)])
for r in part.rects:
    print(f"[{r.x1},{r.x2}] x [{r.y1},{r.y2}] from square {r.source}")

##############################################################################
# A real cover
# ------------
#
# The optimal cover of ``{1..16}`` at eps = 1 double-counts some pairs.

P = PointSet.line(range(1, 17))
cover = exact_min_cover(P, 1).cover
rep = validate(P, cover_to_decomposition(P, cover))
print(f"cover: {len(cover)} squares, multiplicities {rep.multiplicity_histogram}")

##############################################################################
# Snap each square to the half-open box spanning exactly its grid points,
# decompose, and read each rectangle as a pair.

boxes = snap_to_grid(P, cover)
part = squares_to_rectangles(boxes)
W = rectangles_to_partition(P, 1, part, closed_top=False)
rep = validate(P, W)
print(f"partition: {len(part)} rectangles, {W.size} pairs, multiplicities {rep.multiplicity_histogram}")

##############################################################################
# Pictures of both, as SVG.

(out / "cover.svg").write_text(render_svg(P, cover))
(out / "partition.svg").write_text(render_svg(P, part))
print(f"wrote {out / 'cover.svg'} and {out / 'partition.svg'}")
