"""Pair decompositions of points on the line through the grid lifting."""

from .ck import SplitNode, ck_wspd_1d, fair_split_tree
from .greedy import cleanup, greedy_cover, greedy_set_cover
from .lifting import (
    GridPoint,
    Lifting,
    ShadowSquare,
    SquareCover,
    cover_to_decomposition,
    covered,
    lift,
    maximal_pairs,
    validate_cover,
    vicinity,
)
from .partition import (
    Rect,
    RectanglePartition,
    cover_to_partition,
    rectangles_to_partition,
    snap_to_grid,
    squares_to_rectangles,
)
from .sweep import CoverSegmentTree, sweep3_cover

__all__ = [
    "GridPoint", "ShadowSquare", "SquareCover", "Lifting", "lift", "maximal_pairs",
    "covered", "vicinity", "cover_to_decomposition", "validate_cover",
    "greedy_set_cover", "greedy_cover", "cleanup",
    "CoverSegmentTree", "sweep3_cover",
    "SplitNode", "fair_split_tree", "ck_wspd_1d",
    "Rect", "RectanglePartition", "squares_to_rectangles", "rectangles_to_partition",
    "snap_to_grid", "cover_to_partition",
]
