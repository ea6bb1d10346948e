"""
Net-trees and their WSPD
========================

A net-tree groups points at scales ``11^l``.  Pairs of tree nodes whose
representatives are far apart compared to the scale form a WSPD in any
metric of low doubling dimension.
"""

import numpy as np

from pairdecomp import PointSet, build_net_tree, build_wspd_doubling, validate, verify_net_tree
from pairdecomp.core import DistanceOracle

rng = np.random.default_rng(1)

##############################################################################
# Build and check
# ---------------
#
# The verifier checks the covering, packing and inheritance invariants
# directly, ball by ball.

P = PointSet.euclidean(rng.random((300, 2)))
tree = build_net_tree(P)
levels = [lv for lv in tree.level if lv != -np.inf]
print(f"{len(tree)} nodes, levels {min(levels)}..{max(levels)}, violations: {verify_net_tree(tree)}")

##############################################################################
# Extract the WSPD for a few separations.  Work stays linear in the output.
# The separation test carries a factor ``8 * 2.2``, so at a few hundred
# points most pairs come out as two singletons.

O = tree.oracle
for eps in (1.0, 0.5, 0.25):
    stats = {}
    W = build_wspd_doubling(tree, eps, stats=stats)
    rep = validate(P, W, oracle=O)
    print(f"eps={eps:.2f} pairs={W.size:6d} queue pops={stats['queue_pops']:6d} "
          f"valid={rep.ok} histogram={rep.multiplicity_histogram}")

##############################################################################
# Points on a curve have doubling dimension one, like the line.

t = np.sort(rng.random(300)) * 4 * np.pi
C = PointSet.euclidean(np.column_stack([np.cos(t), np.sin(t), t / 10]))
W = build_wspd_doubling(build_net_tree(C), 0.5)
print(f"helix: {W.size} pairs, valid={validate(C, W, oracle=DistanceOracle.from_points(C)).ok}")
