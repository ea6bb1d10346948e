"""Net-trees and the WSPD they induce in doubling metrics.

The tree is built from nested greedy nets.  ``N_l`` contains ``N_{l+1}``
and adds, in id order, every point farther than ``r tau^l`` from the net
so far; so ``N_l`` covers ``P`` within ``r tau^l`` and its points are more
than ``r tau^l`` apart.  A point leaving the nets above level ``l`` hangs
below its nearest point of ``N_{l+1}``.  Chains of one-child nodes are
compressed away.

With ``r = 1`` this gives covering radius ``tau/(tau-1) tau^l`` and
packing radius ``0.4 tau^(l(parent)-1)``, inside the required
``2 tau/(tau-1)`` and ``(tau-5)/(2(tau-1))`` constants for ``tau = 11``.
The verifier checks the three invariants directly anyway.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import DegeneratePairError, DistanceOracle, Pair, PairDecomposition, PointSet

__all__ = [
    "TAU",
    "NetTree",
    "NetTreeViolation",
    "build_net_tree",
    "verify_net_tree",
    "build_wspd_doubling",
]

TAU = 11
COVER = 2 * TAU / (TAU - 1)
PACK = (TAU - 5) / (2 * (TAU - 1))
MAX_RETRIES = 3


@dataclass
class NetTree:
    """Compressed net-tree over point ids ``0..n-1``.

    Node arrays are indexed by node id; the root is node 0.  Leaves have
    level ``-inf``.  ``first``/``last`` give the range of a node's leaves
    in ``leaf_order``, so ``P_v = leaf_order[first[v]:last[v]]``.
    """

    oracle: DistanceOracle
    rep: list
    level: list
    parent: list
    children: list
    leaf_order: np.ndarray = None
    first: list = None
    last: list = None
    net_radius: float = 1.0
    retries: int = 0
    tau: int = TAU

    def __len__(self) -> int:
        return len(self.rep)

    @property
    def root(self) -> int:
        return 0

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def points(self, v: int) -> np.ndarray:
        return self.leaf_order[self.first[v]:self.last[v]]

    def scale(self, v: int) -> float:
        lv = self.level[v]
        return 0.0 if lv == -math.inf else float(self.tau) ** lv


@dataclass(frozen=True)
class NetTreeViolation:
    invariant: str
    node: int
    detail: str = ""


def _as_oracle(oracle) -> DistanceOracle:
    if isinstance(oracle, PointSet):
        return DistanceOracle.from_points(oracle)
    if isinstance(oracle, DistanceOracle):
        return oracle
    return DistanceOracle.from_matrix(oracle)


def _float_matrix(oracle: DistanceOracle) -> np.ndarray:
    if oracle.exact:
        c = np.array([float(v) for v in oracle.points.coords])
        return np.abs(c[:, None] - c[None, :])
    return np.asarray(oracle.matrix, dtype=np.float64)


def _nets(D: np.ndarray, radius: float):
    """Top level of every point in the nested greedy nets, and the nets' range.

    Returns ``(top, parent, lo, hi)`` where ``top[x]`` is the highest level
    with ``x`` in the net (``hi`` for point 0) and ``parent[x]`` is the
    nearest point of ``N_{top[x]+1}`` (``-1`` for point 0).
    """
    n = len(D)
    off = D[~np.eye(n, dtype=bool)]
    cp, diam = float(off.min()), float(off.max())
    hi = math.ceil(math.log(diam / radius, TAU)) + 1
    lo = math.floor(math.log(cp / radius, TAU)) - 1
    top = np.full(n, lo, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    top[0] = hi
    in_net = np.zeros(n, dtype=bool)
    in_net[0] = True
    mind = D[0].copy()
    for lev in range(hi - 1, lo - 1, -1):
        thr = radius * float(TAU) ** lev
        members = np.flatnonzero(in_net)
        while True:
            cand = np.flatnonzero(mind > thr)
            if len(cand) == 0:
                break
            x = int(cand[0])
            # nearest net point one level up, smallest id on ties
            row = D[x, members]
            parent[x] = int(members[np.flatnonzero(row == row.min())[0]])
            top[x] = lev
            in_net[x] = True
            mind = np.minimum(mind, D[x])
        if in_net.all():
            break
    return top, parent, lo, hi


def _assemble(oracle, top, parent, radius) -> NetTree:
    n = len(top)
    # split levels of each point: levels where some other point hangs below it
    hangs = [[] for _ in range(n)]
    for x in range(1, n):
        hangs[int(parent[x])].append((int(top[x]) + 1, x))
    for h in hangs:
        h.sort(key=lambda t: (-t[0], t[1]))

    rep, level, par, children = [], [], [], []

    def new_node(x, lev, p):
        rep.append(x)
        level.append(lev)
        par.append(p)
        children.append([])
        if p >= 0:
            children[p].append(len(rep) - 1)
        return len(rep) - 1

    # chain of x: one node per distinct split level, then its leaf
    stack = [(0, -1)]
    while stack:
        x, p = stack.pop()
        levels = sorted({lev for lev, _ in hangs[x]}, reverse=True)
        if not levels:
            new_node(x, -math.inf, p)
            continue
        below = {}
        for lev, z in hangs[x]:
            below.setdefault(lev, []).append(z)
        cur = p
        pending = []
        for lev in levels:
            cur = new_node(x, lev, cur)
            for z in below[lev]:
                pending.append((z, cur))
        new_node(x, -math.inf, cur)
        stack.extend(reversed(pending))

    tree = NetTree(oracle, rep, level, par, children, net_radius=radius)
    _index_leaves(tree)
    return tree


def _index_leaves(tree: NetTree):
    m = len(tree.rep)
    first, last = [0] * m, [0] * m
    order = []
    stack = [(tree.root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            last[v] = len(order)
            continue
        first[v] = len(order)
        if not tree.children[v]:
            order.append(tree.rep[v])
            last[v] = len(order)
            continue
        stack.append((v, True))
        for c in reversed(tree.children[v]):
            stack.append((c, False))
    tree.leaf_order = np.asarray(order, dtype=np.int64)
    tree.first, tree.last = first, last


def verify_net_tree(tree: NetTree, D: np.ndarray | None = None) -> list:
    """Check Covering, Packing, Inheritance and the shape rules directly.

    Returns the list of :class:`NetTreeViolation` (empty when valid).
    """
    if D is None:
        D = _float_matrix(tree.oracle)
    n = len(D)
    tol = 1e-9
    out = []
    pos = np.empty(n, dtype=np.int64)
    pos[tree.leaf_order] = np.arange(n)
    if sorted(tree.leaf_order.tolist()) != list(range(n)):
        out.append(NetTreeViolation("leaves", tree.root, "leaves are not the point set"))
    for v in range(len(tree)):
        r = tree.rep[v]
        pts = tree.points(v)
        if r not in set(pts.tolist()):
            out.append(NetTreeViolation("rep", v, "representative outside P_v"))
        # Covering
        reach = COVER * tree.scale(v)
        if D[r, pts].max() > reach * (1 + tol):
            out.append(NetTreeViolation("covering", v, f"radius {D[r, pts].max():.6g} > {reach:.6g}"))
        kids = tree.children[v]
        if kids:
            if len(kids) < 2:
                out.append(NetTreeViolation("shape", v, "internal node with one child"))
            if not any(tree.rep[c] == r for c in kids):
                out.append(NetTreeViolation("inheritance", v))
            for c in kids:
                if not tree.level[c] < tree.level[v]:
                    out.append(NetTreeViolation("shape", c, "level not below parent"))
        p = tree.parent[v]
        if p >= 0:
            # Packing
            rad = PACK * float(tree.tau) ** (tree.level[p] - 1)
            near = np.flatnonzero(D[r] <= rad * (1 - tol))
            inside = (pos[near] >= tree.first[v]) & (pos[near] < tree.last[v])
            if not inside.all():
                out.append(NetTreeViolation("packing", v, f"{int((~inside).sum())} points escape"))
    return out


def build_net_tree(oracle, n: int | None = None) -> NetTree:
    """Net-tree with ``tau = 11`` satisfying Covering, Packing and Inheritance.

    Quadratic time and memory.  The result is verified; if verification
    fails the net radius is halved and the construction retried (up to
    three times).  ``tree.retries`` reports how many retries were used.

    Raises
    ------
    DegeneratePairError
        If two points coincide.
    """
    oracle = _as_oracle(oracle)
    if n is not None and n != oracle.n:
        raise ValueError(f"oracle has {oracle.n} points, expected {n}")
    if oracle.n < 1:
        raise ValueError("need at least one point")
    if oracle.n == 1:
        tree = NetTree(oracle, [0], [-math.inf], [-1], [[]])
        _index_leaves(tree)
        return tree
    D = _float_matrix(oracle)
    if np.any(D[~np.eye(len(D), dtype=bool)] <= 0):
        raise DegeneratePairError("duplicate points")
    radius = 1.0
    for attempt in range(MAX_RETRIES + 1):
        top, parent, _, _ = _nets(D, radius)
        tree = _assemble(oracle, top, parent, radius)
        tree.retries = attempt
        bad = verify_net_tree(tree, D)
        if not bad:
            return tree
        radius /= 2
    raise RuntimeError(f"net-tree verification failed after {MAX_RETRIES} retries: {bad[:3]}")


def build_wspd_doubling(tree: NetTree, eps, stats: dict | None = None) -> PairDecomposition:
    """Partition 1/eps-WSPD of the node pairs ``{P_u, P_v}`` of a net-tree.

    A FIFO queue starts with ``{root, root}``.  A pair ``{u, v}`` at level
    ``L = max(l(u), l(v))`` is separated when
    ``8 (2 tau / (tau - 1)) tau^L <= eps d(rep u, rep v)``; otherwise the
    node of larger level (``u`` on ties) is replaced by its children.  A
    pair ``{u, u}`` expands into the child pairs ``{c_i, c_j}, i <= j``
    and leaf self-pairs are dropped.

    ``stats`` (optional) receives ``queue_pops`` and ``distance_calls``.
    """
    eps = float(eps)
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    oracle = tree.oracle
    calls0 = oracle.calls
    pairs = []
    queue = deque([(tree.root, tree.root)])
    pops = 0
    while queue:
        u, v = queue.popleft()
        pops += 1
        if u == v:
            kids = tree.children[u]
            for i, a in enumerate(kids):
                for b in kids[i:]:
                    queue.append((a, b))
            continue
        big = max(tree.scale(u), tree.scale(v))
        if 8 * COVER * big <= eps * float(oracle(tree.rep[u], tree.rep[v])):
            pu = tuple(sorted(tree.points(u).tolist()))
            pv = tuple(sorted(tree.points(v).tolist()))
            pairs.append(Pair._trusted(pu, pv) if pu[0] < pv[0] else Pair._trusted(pv, pu))
            continue
        if tree.level[u] >= tree.level[v]:
            for c in tree.children[u]:
                queue.append((c, v))
        else:
            for c in tree.children[v]:
                queue.append((u, c))
    if stats is not None:
        stats.update(queue_pops=pops, distance_calls=oracle.calls - calls0)
    return PairDecomposition(pairs, eps, kind="wspd", coverage="partition")
