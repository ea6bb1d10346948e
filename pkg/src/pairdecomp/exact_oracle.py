"""Exact minimum covers of the lifted grid by shadow squares.

:func:`exact_min_cover` is a deterministic branch and bound with set and
element domination, forced sets, a disjoint-options packing bound and
(optionally) the linear-programming bound from HiGHS.  :func:`brute_min_cover`
enumerates subsets and is only meant as an independent check on tiny inputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .core import PointSet, to_fraction
from .one_dim.greedy import greedy_set_cover
from .one_dim.lifting import Lifting, SquareCover

__all__ = [
    "CoverInstance",
    "CoverResult",
    "InstanceTooLarge",
    "exact_min_cover",
    "brute_min_cover",
    "reduce_instance",
    "packing_bound",
]

DEFAULT_NODE_LIMIT = 10**7
BRUTE_LIMIT = 15
_LP_SLACK = 1e-7


class InstanceTooLarge(ValueError):
    pass


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _options(sets: dict) -> dict:
    """element -> bitmask of set ids containing it"""
    opts = {}
    for k, m in sets.items():
        b = 1 << k
        for e in _bits(m):
            opts[e] = opts.get(e, 0) | b
    return opts


@dataclass
class CoverInstance:
    """Grid points of the lifting (bitmask ``universe``) versus anchored squares.

    ``sets`` maps a set id to the bitmask of elements it covers; set ``k`` is
    the shadow square anchored at ``anchors[k]``.
    """

    universe: int
    anchors: list
    sets: dict

    @classmethod
    def from_points(cls, P: PointSet, eps) -> "CoverInstance":
        L = Lifting(P, eps)
        anchors = L.anchors()
        return cls(L.full_mask, anchors, {k: L.anchor_mask(*a) for k, a in enumerate(anchors)})


@dataclass
class CoverResult:
    cover: SquareCover
    status: str
    lower_bound: int
    nodes: int

    @property
    def size(self) -> int:
        return len(self.cover)


def reduce_instance(uncovered: int, sets: dict):
    """Apply forcing and domination rules until nothing changes.

    * a set whose (restricted) elements are a subset of another's is dropped;
    * an element with a single option forces that set into the cover;
    * an element whose options include all options of another element is
      dropped, since covering the other one covers it too.

    Returns ``(forced, uncovered, sets)``, or None when some element has no
    option left.
    """
    forced = []
    sets = {k: m & uncovered for k, m in sets.items() if m & uncovered}
    while True:
        changed = False
        kept = {}
        for k in sorted(sets, key=lambda k: (-sets[k].bit_count(), k)):
            m = sets[k]
            if any(m & ~other == 0 for other in kept.values()):
                changed = True
                continue
            kept[k] = m
        sets = kept
        opts = _options(sets)
        if len(opts) != uncovered.bit_count():
            return None
        single = [o.bit_length() - 1 for o in opts.values() if o & (o - 1) == 0]
        if single:
            for k in dict.fromkeys(single):
                forced.append(k)
                uncovered &= ~sets.pop(k)
            sets = {k: m & uncovered for k, m in sets.items() if m & uncovered}
            if not uncovered:
                return forced, 0, {}
            continue
        keep = 0
        kept_opts = []
        for e in sorted(opts, key=lambda e: (opts[e].bit_count(), e)):
            o = opts[e]
            if any(ko & ~o == 0 for ko in kept_opts):
                continue
            kept_opts.append(o)
            keep |= 1 << e
        if keep != uncovered:
            changed = True
            uncovered = keep
            sets = {k: m & uncovered for k, m in sets.items() if m & uncovered}
        if not changed:
            return forced, uncovered, sets


def packing_bound(opts: dict) -> int:
    """Greedy family of elements with pairwise disjoint option sets.

    Each such element needs its own set, so the family size bounds the
    optimum from below.  Elements with few options are taken first.
    """
    used = 0
    count = 0
    for e in sorted(opts, key=lambda e: (opts[e].bit_count(), e)):
        if opts[e] & used == 0:
            used |= opts[e]
            count += 1
    return count


def _lp_bound(uncovered: int, sets: dict):
    elems = {e: r for r, e in enumerate(_bits(uncovered))}
    ids = list(sets)
    rows, cols = [], []
    for c, k in enumerate(ids):
        for e in _bits(sets[k]):
            rows.append(elems[e])
            cols.append(c)
    A = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(elems), len(ids)))
    res = linprog(np.ones(len(ids)), A_ub=-A, b_ub=-np.ones(len(elems)),
                  bounds=(0, 1), method="highs")
    if res.status != 0:
        return 0, {}
    return math.ceil(res.fun - _LP_SLACK), dict(zip(ids, res.x))


class _BranchAndBound:
    def __init__(self, node_limit: int, use_lp: bool):
        self.node_limit = node_limit
        self.use_lp = use_lp
        self.nodes = 0
        self.aborted = False

    def bound(self, uncovered, sets):
        opts = _options(sets)
        lb = packing_bound(opts)
        weights = {}
        if self.use_lp:
            lp, weights = _lp_bound(uncovered, sets)
            lb = max(lb, lp)
        return lb, opts, weights

    def solve(self, uncovered: int, sets: dict, ub: int):
        """Best cover strictly smaller than ``ub`` as ``(size, ids)``, else None."""
        self.nodes += 1
        if self.nodes > self.node_limit:
            self.aborted = True
            return None
        reduced = reduce_instance(uncovered, sets)
        if reduced is None:
            return None
        forced, uncovered, sets = reduced
        f = len(forced)
        if not uncovered:
            return (f, forced) if f < ub else None
        if f + 1 >= ub:
            return None
        lb, opts, weights = self.bound(uncovered, sets)
        if f + lb >= ub:
            return None
        # branch on the element with fewest options; later branches exclude
        # the alternatives already tried
        e = min(opts, key=lambda e: (opts[e].bit_count(), e))
        cands = sorted(_bits(opts[e]),
                       key=lambda k: (-weights.get(k, 0.0), -sets[k].bit_count(), k))
        best = None
        sets = dict(sets)
        for k in cands:
            m = sets.pop(k)
            sub = self.solve(uncovered & ~m, dict(sets), ub - f - 1)
            if sub is not None:
                ub = f + 1 + sub[0]
                best = (ub, forced + [k] + sub[1])
            if self.aborted:
                break
        return best


def exact_min_cover(P: PointSet, eps, budget: int = DEFAULT_NODE_LIMIT,
                    lp_bound: bool = True) -> CoverResult:
    """Minimum cover of the lifted grid by anchored shadow squares.

    The incumbent starts at the greedy cover.  With ``lp_bound=False`` only
    the packing bound prunes, which is exact but slow beyond ~20 points.
    When ``budget`` nodes are exceeded the best incumbent is returned with
    ``status="bound_only"`` and the root lower bound.
    """
    if P.n < 2:
        raise ValueError("need at least two points")
    eps = to_fraction(eps)
    L = Lifting(P, eps)
    inst = CoverInstance.from_points(P, eps)

    greedy = greedy_set_cover(list(inst.sets.values()), inst.anchors, inst.universe)
    best = list(greedy)

    bb = _BranchAndBound(budget, lp_bound)
    reduced = reduce_instance(inst.universe, inst.sets)
    forced, rest, rest_sets = reduced
    root_lb = len(forced)
    if rest:
        root_lb += bb.bound(rest, rest_sets)[0]
    if root_lb < len(best):
        found = bb.solve(inst.universe, inst.sets, len(best))
        if found is not None:
            best = found[1]
    status = "bound_only" if bb.aborted else "optimal"
    lower = len(best) if status == "optimal" else root_lb
    picked = sorted(inst.anchors[k] for k in best)
    cover = SquareCover([L.square(i, j) for i, j in picked], eps)
    return CoverResult(cover, status, lower, bb.nodes)


def brute_min_cover(P: PointSet, eps) -> int:
    """Optimum cover size by enumerating subsets of squares in increasing size."""
    if P.n < 2:
        raise ValueError("need at least two points")
    L = Lifting(P, eps)
    if L.N > BRUTE_LIMIT:
        raise InstanceTooLarge(f"{L.N} grid points exceed the brute-force limit {BRUTE_LIMIT}")
    c = L.coords
    squares = [L.square(i, j) for i, j in L.anchors()]
    grid = L.anchors()
    # membership straight from the closed square, no index boxes
    masks = []
    for s in squares:
        m = 0
        for e, (i, j) in enumerate(grid):
            if s.contains(c[i], c[j]):
                m |= 1 << e
        masks.append(m)
    full = (1 << len(grid)) - 1
    for size in range(1, len(masks) + 1):
        for combo in itertools.combinations(masks, size):
            u = 0
            for m in combo:
                u |= m
            if u == full:
                return size
    raise AssertionError("the anchored squares always cover the grid")
