"""Pair decompositions of finite point sets.

Well-separated, semi-separated and stable (approximate biclique cover)
pair decompositions, with validators for each notion:

* :mod:`pairdecomp.core` -- point sets, distance oracles, validators
* :mod:`pairdecomp.one_dim` -- minimum WSPD on the line via shadow squares
* :mod:`pairdecomp.exact_oracle` -- exact minimum cover by branch and bound
* :mod:`pairdecomp.abc_metric` -- stable pairs in any finite metric
* :mod:`pairdecomp.abc_euclid` -- stable pairs in R^d via shifted quadtrees
* :mod:`pairdecomp.wspd_doubling` -- net-trees and their WSPD
* :mod:`pairdecomp.experiment` -- dataset families and comparison tables
"""

from .abc_euclid import build_abc_euclid, cell_sphere_intersects, normalize
from .abc_metric import build_abc_metric, build_abc_spread, removal_order
from .core import (
    DegeneratePairError,
    DistanceOracle,
    Pair,
    PairDecomposition,
    PointSet,
    SeparationReport,
    diameter,
    is_separated,
    set_distances,
    spread,
    stability,
    validate,
)
from .datasets import DatasetSpec, generate
from .exact_oracle import brute_min_cover, exact_min_cover
from .experiment import run_experiment
from .one_dim import (
    ck_wspd_1d,
    cleanup,
    cover_to_partition,
    greedy_cover,
    rectangles_to_partition,
    squares_to_rectangles,
    sweep3_cover,
)
from .render import render_svg
from .wspd_doubling import build_net_tree, build_wspd_doubling, verify_net_tree

__version__ = "0.1.0"

__all__ = [
    "DegeneratePairError",
    "DistanceOracle",
    "Pair",
    "PairDecomposition",
    "PointSet",
    "SeparationReport",
    "diameter",
    "is_separated",
    "set_distances",
    "spread",
    "stability",
    "validate",
    "greedy_cover",
    "sweep3_cover",
    "cleanup",
    "ck_wspd_1d",
    "squares_to_rectangles",
    "rectangles_to_partition",
    "cover_to_partition",
    "exact_min_cover",
    "brute_min_cover",
    "build_abc_metric",
    "build_abc_spread",
    "removal_order",
    "build_abc_euclid",
    "normalize",
    "cell_sphere_intersects",
    "build_net_tree",
    "verify_net_tree",
    "build_wspd_doubling",
    "DatasetSpec",
    "generate",
    "run_experiment",
    "render_svg",
]
