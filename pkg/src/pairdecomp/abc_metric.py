"""Approximate biclique covers in a general metric.

Points are peeled off one closest pair at a time and then inserted back in
reverse.  A point ``p`` whose nearest surviving neighbour ``q`` is at distance
``l`` gets one pair ``{p} x ring`` for every nonempty ring of radii
``l (1 + eps/8)^(i-2) < d <= l (1 + eps/8)^(i-1)``.  Points beyond the last
ring are reached through ``q``: the pair already covering ``(q, f)`` receives
``p`` on the side of ``q``.  Since ``d(p, q)`` is tiny compared to ``d(q, f)``,
the pair stays stable.

Every point pair ends up covered exactly once, every pair is eps/8-stable
(up to the drift of the far registrations) and the side that started as the
singleton ``{p}`` keeps a diameter of at most eps times the pair distance,
so the output is also an SSPD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DistanceOracle, Pair, PairDecomposition, PointSet

__all__ = [
    "RemovalOrder",
    "EvolvingPair",
    "ring_count",
    "removal_order",
    "build_abc_metric",
    "build_abc_spread",
]


@dataclass(frozen=True)
class RemovalOrder:
    """Closest-pair peeling order.

    ``removed[k]`` was taken out while ``partner[k]`` was its nearest
    survivor at distance ``ell[k]``, the closest-pair distance of the
    points still present.  ``base`` holds the last two survivors.
    """

    removed: tuple
    partner: tuple
    ell: tuple
    base: tuple


@dataclass
class EvolvingPair:
    """A pair that starts as ``{center} x ring`` and may grow on both sides.

    ``a`` is the side that began as the singleton ``{center}``.
    """

    a: set
    b: set
    origin: tuple  # (center id, ring index)
    d0_min: float
    d0_max: float

    def freeze(self) -> Pair:
        return Pair(tuple(sorted(self.a)), tuple(sorted(self.b)))


def ring_count(n: int, eps: float) -> int:
    """Rings per inserted point, ``4 + ceil((32 / eps) ln n)``."""
    return 4 + math.ceil((32.0 / eps) * math.log(n))


def _check_eps(eps, upper=0.5) -> float:
    eps = float(eps)
    if not 0.0 < eps < upper:
        raise ValueError(f"eps must lie in (0, {upper:g}), got {eps}")
    return eps


def _as_matrix(oracle, n):
    if isinstance(oracle, PointSet):
        oracle = DistanceOracle.from_points(oracle)
    if isinstance(oracle, DistanceOracle):
        D = np.asarray(oracle.matrix, dtype=np.float64)
    else:
        D = np.asarray(oracle, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("expected a square distance matrix")
    if n is not None and D.shape[0] != n:
        raise ValueError(f"oracle has {D.shape[0]} points, expected {n}")
    if D.shape[0] < 2:
        raise ValueError("need at least two points")
    return D


def removal_order(D: np.ndarray) -> RemovalOrder:
    """Peel points by repeated closest-pair extraction.

    Keeps a nearest-survivor cache per point; only points whose cached
    neighbour was just removed are refreshed.  From a closest pair the
    endpoint with the larger id is removed.
    """
    n = len(D)
    work = np.array(D, dtype=np.float64)
    np.fill_diagonal(work, np.inf)
    alive = np.ones(n, dtype=bool)
    nn = work.argmin(axis=1)
    nd = work[np.arange(n), nn]
    removed, partner, ell = [], [], []
    for _ in range(n - 2):
        cand = np.where(alive, nd, np.inf)
        i = int(cand.argmin())
        j = int(nn[i])
        p, q = max(i, j), min(i, j)
        removed.append(p)
        partner.append(q)
        ell.append(float(D[p, q]))
        alive[p] = False
        work[:, p] = np.inf
        stale = np.flatnonzero(alive & (nn == p))
        if len(stale):
            nn[stale] = work[stale].argmin(axis=1)
            nd[stale] = work[stale, nn[stale]]
    base = tuple(int(k) for k in np.flatnonzero(alive))
    return RemovalOrder(tuple(removed), tuple(partner), tuple(ell), base)


class _Builder:
    """Decomposition under construction plus the point-pair owner index."""

    def __init__(self, D: np.ndarray):
        self.D = D
        self.pairs: list[EvolvingPair] = []
        self.owner = np.full(D.shape, -1, dtype=np.int64)

    def new_pair(self, center: int, others: np.ndarray, ring: int):
        k = len(self.pairs)
        d = self.D[center, others]
        self.pairs.append(EvolvingPair({center}, set(others.tolist()), (center, ring),
                                       float(d.min()), float(d.max())))
        self.owner[center, others] = k
        self.owner[others, center] = k

    def join(self, k: int, p: int, q: int):
        """Put ``p`` next to ``q`` in pair ``k``."""
        pair = self.pairs[k]
        side, other = (pair.a, pair.b) if q in pair.a else (pair.b, pair.a)
        side.add(p)
        idx = np.fromiter(other, dtype=np.int64)
        self.owner[p, idx] = k
        self.owner[idx, p] = k

    def insert(self, p: int, q: int, ell: float, present: np.ndarray,
               beta: float, rings: int, far_radius: float | None):
        d = self.D[p, present]
        if far_radius is not None:
            for f in present[d > far_radius]:
                if self.owner[p, f] < 0:
                    self.join(int(self.owner[q, f]), p, q)
        todo = self.owner[p, present] < 0
        near, dn = present[todo], d[todo]
        if len(near) == 0:
            return
        # ring i holds l beta^(i-2) < d <= l beta^(i-1)
        ratio = np.maximum(dn / ell, 1.0)
        idx = np.ceil(np.log(ratio) / math.log(beta)).astype(np.int64) + 1
        # repair rounding at ring boundaries
        idx[dn > ell * beta ** (idx - 1.0)] += 1
        idx[(idx > 1) & (dn <= ell * beta ** (idx - 2.0))] -= 1
        if idx.max() > rings:
            raise AssertionError("point beyond the outermost ring")
        for i in np.unique(idx):
            self.new_pair(p, near[idx == i], int(i))


def _build(D, eps, ring_fn, far_fn) -> tuple[list, RemovalOrder]:
    n = len(D)
    beta = 1.0 + eps / 8.0
    order = removal_order(D)
    b = _Builder(D)
    s, t = order.base
    b.new_pair(s, np.array([t]), 1)
    present = [s, t]
    for p, q, ell in zip(reversed(order.removed), reversed(order.partner), reversed(order.ell)):
        rings = ring_fn(ell)
        b.insert(p, q, ell, np.array(present, dtype=np.int64), beta, rings, far_fn(ell, rings))
        present.append(p)
    if (b.owner[np.triu_indices(n, 1)] < 0).any():
        raise AssertionError("some point pair was left uncovered")
    return b.pairs, order


def build_abc_metric(oracle, n: int | None, eps, trace: list | None = None) -> PairDecomposition:
    """1/eps-ABC of a finite metric with ``O((n / eps) log n)`` pairs.

    Parameters
    ----------
    oracle : DistanceOracle, PointSet or array_like
        Distances, materialised as a dense ``n x n`` matrix.
    n : int or None
        Expected number of points (checked when given).
    eps : float
        Stability target in ``(0, 1/2)``.
    trace : list, optional
        Receives the :class:`EvolvingPair` records, aligned with the output
        pairs (creation distances and the side that began as a singleton).

    Returns
    -------
    PairDecomposition
        ``kind="abc"``, ``coverage="partition"``.  Every point pair is
        covered exactly once and each pair is also 1/eps-semi-separated;
        side ``a`` is the one that began as a singleton.

    Notes
    -----
    The ring count ``M`` uses the total number of points.  Points farther
    than the outer radius of the last ring, ``l (1 + eps/8)^(M-1)``, are
    registered through the nearest survivor.
    """
    eps = _check_eps(eps)
    D = _as_matrix(oracle, n)
    M = ring_count(len(D), eps)
    beta = 1.0 + eps / 8.0
    pairs, _ = _build(D, eps, lambda ell: M, lambda ell, rings: ell * beta ** (rings - 1))
    if trace is not None:
        trace.extend(pairs)
    return PairDecomposition([p.freeze() for p in pairs], eps, kind="abc", coverage="partition")


def build_abc_spread(oracle, n: int | None, eps, trace: list | None = None) -> PairDecomposition:
    """Rings-only variant with ``O((n / eps) log spread)`` pairs.

    Each point gets enough rings to reach the diameter, so no far points
    exist and nothing is registered through a neighbour.  Without that
    drift any ``eps`` in ``(0, 1)`` works.
    """
    eps = _check_eps(eps, upper=1.0)
    D = _as_matrix(oracle, n)
    diam = float(D.max())
    beta = 1.0 + eps / 8.0

    def rings(ell):
        # smallest M with l beta^(M-1) >= diam
        return 2 + max(0, math.ceil(math.log(diam / ell) / math.log(beta)))

    pairs, _ = _build(D, eps, rings, lambda ell, m: None)
    if trace is not None:
        trace.extend(pairs)
    return PairDecomposition([p.freeze() for p in pairs], eps, kind="abc", coverage="partition")
