"""Linear-size ABC and SSPD in R^d from shifted quadtrees.

The points are normalized into ``[0, 1)^d`` and copied into ``D + 1``
shifted quadtrees over ``[0, 2)^d``.  A node of an eps'-quadtree is a
binary cell whose ``1/eps'``-grid splits its points.  Every nonempty
subcell ``C`` with side ``N`` is paired, sphere by sphere, with the points
of the subcells met by the spheres of radius ``rho + i N`` around its
center, ``rho = 8 sqrt(d) N / eps``.

Cells are keyed by integer prefixes of the coordinates scaled to
``[0, 2^53)``, so cell membership is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DegeneratePairError, Pair, PairDecomposition, PointSet

__all__ = [
    "NormalizeMap",
    "ShiftConfig",
    "normalize",
    "eps_prime",
    "shift_config",
    "split_depths",
    "cell_sphere_intersects",
    "build_abc_euclid",
]

GUARD = 1.0 + 1e-6
BITS = 52  # unit of the integer grid is 2^-52, so [0, 2) maps to [0, 2^53)


@dataclass(frozen=True)
class NormalizeMap:
    """``x -> (x - offset) * scale``."""

    offset: np.ndarray
    scale: float

    def __call__(self, x):
        return (np.asarray(x, dtype=np.float64) - self.offset) * self.scale


@dataclass(frozen=True)
class ShiftConfig:
    d: int
    D: int
    shifts: tuple  # nu_i as scalars; the shift vector repeats nu_i in every coordinate


def normalize(P: PointSet):
    """Translate and scale ``P`` into ``[0, 1)^d``.

    Returns the normalized point set and the affine map.  Coordinates are
    snapped down to multiples of ``2^-53`` afterwards.

    Raises
    ------
    DegeneratePairError
        If all points coincide.
    """
    X = P.as_array().astype(np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if len(X) < 2:
        raise ValueError("need at least two points")
    if not np.all(np.isfinite(X)):
        raise ValueError("coordinates must be finite")
    lo = X.min(axis=0)
    side = float((X.max(axis=0) - lo).max())
    if side == 0:
        raise DegeneratePairError("all points coincide")
    m = NormalizeMap(lo, 1.0 / (side * GUARD))
    Y = np.floor(m(X) * 2.0**53) / 2.0**53
    return PointSet.euclidean(Y), m


def eps_prime(eps: float, d: int):
    """Largest power of two strictly below ``eps / (128 d^2)`` and its log."""
    target = eps / (128.0 * d * d)
    lam = math.floor(-math.log2(target)) + 1
    # guard against log2 rounding either way
    while 2.0**-lam >= target:
        lam += 1
    while lam > 1 and 2.0 ** -(lam - 1) < target:
        lam -= 1
    return 2.0**-lam, lam


def shift_config(d: int) -> ShiftConfig:
    D = 2 * math.ceil(d / 2)
    return ShiftConfig(d, D, tuple(i / (D + 1) for i in range(D + 1)))


def cell_sphere_intersects(cell, center, radius) -> bool:
    """True when the sphere ``|x - center| = radius`` meets the closed cube.

    ``cell`` is ``(corner, side)``.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    corner, side = cell
    lo = np.asarray(corner, dtype=np.float64)
    hi = lo + side
    c = np.asarray(center, dtype=np.float64)
    near = np.maximum(np.maximum(lo - c, c - hi), 0.0)
    far = np.maximum(np.abs(c - lo), np.abs(c - hi))
    return bool(np.linalg.norm(near) <= radius <= np.linalg.norm(far))


def _key_at(ints, depth: int):
    """Cell keys of integer coordinates at quadtree depth ``depth``."""
    sh = BITS + 1 - depth
    if sh < 0:
        raise DegeneratePairError(
            "points too close for the 2^-52 grid: a subcell would be finer than one unit")
    return ints >> sh


def split_depths(ints: np.ndarray) -> list:
    """Depths and keys of the split nodes of the compressed quadtree.

    A split node is a cell whose points fall into at least two children.
    Chains of single-child cells are skipped by reading off the highest
    bit where the points disagree.
    """
    out = []
    stack = [np.arange(len(ints))]
    while stack:
        idx = stack.pop()
        pts = ints[idx]
        spread_bits = int(max(int(v).bit_length()
                              for v in np.bitwise_xor(pts.min(axis=0), pts.max(axis=0))))
        if spread_bits == 0:
            raise DegeneratePairError("two points share a cell at full resolution")
        depth = BITS + 1 - spread_bits
        out.append((depth, tuple(int(v) for v in _key_at(pts[0], depth))))
        child = _key_at(pts, depth + 1)
        _, inv = np.unique(child, axis=0, return_inverse=True)
        inv = inv.ravel()
        for g in range(inv.max() + 1):
            sub = idx[inv == g]
            if len(sub) > 1:
                stack.append(sub)
    return out


def _node_pairs(idx, keys, side, rho, n_spheres, emit):
    """Pairs of one eps'-quadtree node.

    ``keys`` are the subcell keys of the points ``idx``; ``side`` is the
    subcell side ``N`` in normalized units.  Returns the number of
    nonempty subcells.
    """
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.ravel()
    u = len(uniq)
    if u < 2:
        return u
    members = [idx[inv == g] for g in range(u)]
    lo = uniq.astype(np.float64) * side
    hi = lo + side
    for g in range(u):
        c = lo[g] + side / 2
        near = np.linalg.norm(np.maximum(np.maximum(lo - c, c - hi), 0.0), axis=1)
        far = np.linalg.norm(np.maximum(np.abs(c - lo), np.abs(c - hi)), axis=1)
        i_lo = np.maximum(np.ceil((near - rho) / side), 0).astype(np.int64)
        i_hi = np.minimum(np.floor((far - rho) / side), n_spheres - 1).astype(np.int64)
        hit = np.flatnonzero(i_lo <= i_hi)
        if len(hit) == 0:
            continue
        if g in hit:
            raise AssertionError("sphere meets its own center cell")
        # sphere index -> subcells it meets
        counts = i_hi[hit] - i_lo[hit] + 1
        cells = np.repeat(hit, counts)
        offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        spheres = np.repeat(i_lo[hit], counts) + offs
        order = np.lexsort((cells, spheres))
        spheres, cells = spheres[order], cells[order]
        bounds = np.flatnonzero(np.diff(spheres)) + 1
        for grp in np.split(cells, bounds):
            far_side = np.concatenate([members[h] for h in grp])
            emit(members[g], far_side)
    return u


def build_abc_euclid(P: PointSet, eps, dedupe: bool = False,
                     diagnostics: dict | None = None) -> PairDecomposition:
    """1/eps-ABC and 1/eps-SSPD of points in R^d.

    Parameters
    ----------
    P : PointSet
        Euclidean (or line) points, ``n >= 2``.
    eps : float
        In ``(0, 1)``.
    dedupe : bool
        Drop repeated pairs with identical sides.
    diagnostics : dict, optional
        Filled with ``eps_prime``, ``lambda``, ``pairs_per_shift``,
        ``nodes_per_shift`` and ``pair_bound``.

    Returns
    -------
    PairDecomposition
        ``kind="abc"``, ``coverage="cover"``; every point pair is covered
        at least once.  Side ``a`` of each pair is a single subcell, the
        small side of the semi-separation.
    """
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    Q, _ = normalize(P)
    x = Q.as_array().astype(np.float64)
    if x.ndim == 1:
        x = x[:, None]
    n, d = x.shape
    ep, lam = eps_prime(eps, d)
    cfg = shift_config(d)
    grid = 1 << lam
    n_spheres = grid + 1  # i = 0 .. 1/eps'

    pairs = []
    seen = set()

    def emit(a, b):
        # sides come from disjoint subcells and are sorted here
        pr = Pair._trusted(tuple(a.tolist()), tuple(np.sort(b).tolist()))
        if dedupe:
            if pr in seen:
                return
            seen.add(pr)
        pairs.append(pr)

    per_shift, nodes_per_shift = [], []
    bound = 0
    for nu in cfg.shifts:
        y = x + nu
        ints = np.floor(y * 2.0**BITS).astype(np.int64)
        if ints.max() >= 1 << (BITS + 1):
            raise AssertionError("shifted point left [0, 2)^d")
        # the lambda binary ancestors of every split node, deduplicated
        cells = set()
        for k, key in split_depths(ints):
            for a in range(k - lam + 1, k + 1):
                cells.add((a, tuple(v >> (k - a) for v in key) if a >= 0 else (0,) * d))
        before = len(pairs)
        nodes = 0
        for a, key in sorted(cells):
            if a >= 0:
                inside = np.all(_key_at(ints, a) == np.asarray(key), axis=1)
                idx = np.flatnonzero(inside)
            else:
                idx = np.arange(n)
            if len(idx) < 2:
                continue
            side = 2.0 ** (1 - a - lam)
            rho = 8.0 * math.sqrt(d) / eps * side
            start = len(pairs)
            u = _node_pairs(idx, _key_at(ints[idx], a + lam), side, rho, n_spheres, emit)
            if u >= 2:
                nodes += 1
                bound += u * n_spheres
                if not dedupe and len(pairs) - start > u * n_spheres:
                    raise AssertionError("node emitted more pairs than its bound")
        per_shift.append(len(pairs) - before)
        nodes_per_shift.append(nodes)

    if diagnostics is not None:
        diagnostics.update(eps_prime=ep, **{"lambda": lam}, pairs_per_shift=per_shift,
                           nodes_per_shift=nodes_per_shift, pair_bound=bound)
    return PairDecomposition(pairs, eps, kind="abc", coverage="cover")
