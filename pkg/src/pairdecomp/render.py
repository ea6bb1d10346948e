"""SVG pictures of the lifted grid with a cover or a partition on top."""

from __future__ import annotations

from .core import PointSet
from .one_dim.lifting import ShadowSquare, SquareCover, _check_line
from .one_dim.partition import Rect, RectanglePartition

__all__ = ["render_svg"]

SIZE = 640
MARGIN = 20


def _boxes(obj):
    if obj is None:
        return [], "square"
    if isinstance(obj, RectanglePartition):
        return [(r.x1, r.x2, r.y1, r.y2) for r in obj.rects], "rect"
    items = obj.squares if isinstance(obj, SquareCover) else list(obj)
    out, cls = [], "square"
    for s in items:
        if isinstance(s, ShadowSquare):
            (x1, x2), (y1, y2) = s.extent
            out.append((x1, x2, y1, y2))
        elif isinstance(s, Rect):
            out.append((s.x1, s.x2, s.y1, s.y2))
            cls = "rect"
        else:
            raise TypeError(f"cannot draw {type(s).__name__}")
    return out, cls


def render_svg(P: PointSet, cover=None) -> str:
    """SVG of the grid points ``(p_i, p_j), i < j`` plus squares or rectangles.

    ``cover`` is a :class:`SquareCover`, a :class:`RectanglePartition`, a
    list of squares or rectangles, or None.  Squares get class ``square``
    and partition rectangles class ``rect``; each shape is one ``<rect>``.
    The output depends only on the inputs.
    """
    try:
        _check_line(P)
    except ValueError:
        raise ValueError("render_svg needs an exact point set on the line") from None
    boxes, cls = _boxes(cover)
    c = [float(v) for v in P.coords]
    xs = c + [float(v) for b in boxes for v in b[:2]]
    ys = c + [float(v) for b in boxes for v in b[2:]]
    lo, hi = min(xs + ys), max(xs + ys)
    span = (hi - lo) or 1.0
    k = (SIZE - 2 * MARGIN) / span

    def sx(v):
        return MARGIN + (float(v) - lo) * k

    def sy(v):
        return SIZE - MARGIN - (float(v) - lo) * k

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        "<style>.square{fill:#3b7dd8;fill-opacity:0.15;stroke:#3b7dd8;stroke-width:1}"
        ".rect{fill:#d8703b;fill-opacity:0.15;stroke:#d8703b;stroke-width:1}"
        ".grid-point{fill:#222}.diagonal{stroke:#999;stroke-dasharray:4 3}</style>",
        f'<line class="diagonal" x1="{sx(lo):.2f}" y1="{sy(lo):.2f}" x2="{sx(hi):.2f}" y2="{sy(hi):.2f}"/>',
    ]
    for x1, x2, y1, y2 in boxes:
        out.append(f'<rect class="{cls}" x="{sx(x1):.2f}" y="{sy(y2):.2f}" '
                   f'width="{(float(x2) - float(x1)) * k:.2f}" height="{(float(y2) - float(y1)) * k:.2f}"/>')
    for i in range(P.n):
        for j in range(i + 1, P.n):
            out.append(f'<circle class="grid-point" cx="{sx(c[i]):.2f}" cy="{sy(c[j]):.2f}" r="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
