"""Point sets, distance oracles, pair decompositions and their validators.

Two numeric regimes live side by side here.  Points on the real line are
stored as exact :class:`fractions.Fraction` values and every separation
inequality over them is decided exactly.  Points in R^d (and explicit
distance matrices) use float64 and compare with a relative tolerance of
``REL_TOL``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "REL_TOL",
    "DegeneratePairError",
    "PointSet",
    "DistanceOracle",
    "Pair",
    "PairDecomposition",
    "SeparationReport",
    "to_fraction",
    "set_distances",
    "diameter",
    "stability",
    "is_separated",
    "validate",
    "spread",
    "leq",
]

REL_TOL = 1e-9

KINDS = ("wspd", "sspd", "abc")
COVERAGES = ("cover", "partition")


class DegeneratePairError(ValueError):
    """Raised when two point sets touch (zero distance) or a point set collapses."""


def to_fraction(value) -> Fraction:
    """Convert a number or decimal string to an exact Fraction.

    Strings and ints are parsed exactly ("0.1" is 1/10).  Floats keep their
    exact binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(float(value))
    if isinstance(value, np.integer):
        return Fraction(int(value))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def leq(lhs, rhs, exact: bool) -> bool:
    """``lhs <= rhs``, exactly or up to ``REL_TOL`` relative slack."""
    if exact:
        return lhs <= rhs
    return float(lhs) <= float(rhs) + REL_TOL * max(abs(float(lhs)), abs(float(rhs)))


@dataclass(frozen=True)
class PointSet:
    """An immutable set of distinct points.

    In line mode (``dim == 1`` and ``exact``) ``coords`` is a tuple of
    Fractions in ascending order.  Otherwise ``coords`` is a read-only
    ``(n, d)`` float64 array.  Point ids are 0-based positions.
    """

    coords: object
    dim: int
    exact: bool

    @classmethod
    def line(cls, values: Iterable) -> "PointSet":
        """Exact points on the real line, sorted ascending."""
        pts = sorted(to_fraction(v) for v in values)
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise DegeneratePairError(f"duplicate point {a}")
        return cls(tuple(pts), 1, True)

    @classmethod
    def euclidean(cls, array) -> "PointSet":
        """Float points in R^d; a 1-d array is read as d=1 (not sorted)."""
        arr = np.array(array, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError("expected an (n, d) array of coordinates")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite coordinate")
        if len(np.unique(arr, axis=0)) != len(arr):
            raise DegeneratePairError("duplicate points")
        arr.setflags(write=False)
        return cls(arr, arr.shape[1], False)

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        if self.exact:
            return np.array([float(c) for c in self.coords])[:, None]
        return self.coords


class DistanceOracle:
    """Symmetric distance function over point ids ``0..n-1``.

    Built from a :class:`PointSet` (``kind="euclidean"``) or from an explicit
    distance matrix (``kind="explicit-matrix"``).  Line point sets keep exact
    Fraction arithmetic; everything else goes through a cached float matrix.
    """

    def __init__(self, n: int, kind: str, points: PointSet | None = None,
                 matrix: np.ndarray | None = None):
        self.n = n
        self.kind = kind
        self.points = points
        self.exact = bool(points is not None and points.exact)
        self._matrix = matrix
        self.calls = 0

    @classmethod
    def from_points(cls, points: PointSet) -> "DistanceOracle":
        return cls(points.n, "euclidean", points=points)

    @classmethod
    def from_matrix(cls, matrix, check_triangle: bool = False) -> "DistanceOracle":
        m = np.array(matrix, dtype=np.float64)
        n = len(m)
        if m.shape != (n, n):
            raise ValueError("distance matrix must be square")
        if not np.allclose(m, m.T, rtol=REL_TOL, atol=0):
            raise ValueError("distance matrix is not symmetric")
        if np.any(np.diag(m) != 0):
            raise ValueError("distance matrix has non-zero diagonal")
        off = m[~np.eye(n, dtype=bool)]
        if np.any(off <= 0):
            raise DegeneratePairError("distinct points at distance zero")
        if check_triangle:
            # d(i,k) <= d(i,j) + d(j,k), one intermediate j at a time keeps memory O(n^2)
            for j in range(n):
                via = m[:, j][:, None] + m[j, :][None, :]
                if np.any(m > via * (1 + REL_TOL)):
                    raise ValueError(f"triangle inequality violated through point {j}")
        m.setflags(write=False)
        return cls(n, "explicit-matrix", matrix=m)

    @property
    def matrix(self) -> np.ndarray:
        """Full float64 distance matrix (computed once, O(n^2) memory)."""
        if self._matrix is None:
            x = self.points.as_array()
            diff = x[:, None, :] - x[None, :, :]
            m = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def __call__(self, i: int, j: int):
        self.calls += 1
        if self.exact:
            return abs(self.points.coords[i] - self.points.coords[j])
        if self._matrix is None and self.points is not None:
            a = self.points.coords[i]
            b = self.points.coords[j]
            return float(math.sqrt(float(np.dot(a - b, a - b))))
        return float(self.matrix[i, j])

    # set-level queries; line mode stays exact
    def diameter(self, S: Sequence[int]):
        if self.exact:
            c = self.points.coords
            vals = [c[i] for i in S]
            return max(vals) - min(vals)
        if len(S) == 1:
            return 0.0
        idx = np.asarray(S)
        return float(self.matrix[np.ix_(idx, idx)].max())

    def min_max(self, A: Sequence[int], B: Sequence[int]):
        if self.exact:
            return _line_min_max(self.points.coords, A, B)
        block = self.matrix[np.ix_(np.asarray(A), np.asarray(B))]
        return float(block.min()), float(block.max())


def _line_min_max(coords, A, B):
    a = sorted(coords[i] for i in A)
    b = sorted(coords[i] for i in B)
    dmax = max(b[-1] - a[0], a[-1] - b[0])
    if a[-1] < b[0]:
        return b[0] - a[-1], dmax
    if b[-1] < a[0]:
        return a[0] - b[-1], dmax
    # interleaved: closest cross gap is between neighbours in the merged order
    merged = sorted([(x, 0) for x in a] + [(x, 1) for x in b])
    dmin = min(y[0] - x[0] for x, y in zip(merged, merged[1:]) if x[1] != y[1])
    return dmin, dmax


@dataclass(frozen=True)
class Pair:
    """Two disjoint, non-empty sets of point ids (stored as sorted tuples)."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(sorted(int(x) for x in self.a))
        b = tuple(sorted(int(x) for x in self.b))
        if not a or not b:
            raise ValueError("pair sides must be non-empty")
        if len(set(a)) != len(a) or len(set(b)) != len(b):
            raise ValueError("repeated id inside a pair side")
        if not set(a).isdisjoint(b):
            raise ValueError(f"pair sides intersect: {sorted(set(a) & set(b))}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def _trusted(cls, a: tuple, b: tuple) -> "Pair":
        """Skip the checks; callers guarantee sorted, disjoint, non-empty sides."""
        pair = object.__new__(cls)
        object.__setattr__(pair, "a", a)
        object.__setattr__(pair, "b", b)
        return pair

    @property
    def weight(self) -> int:
        return len(self.a) + len(self.b)


@dataclass(frozen=True)
class PairDecomposition:
    pairs: tuple
    eps: object
    kind: str = "wspd"
    coverage: str = "cover"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.coverage not in COVERAGES:
            raise ValueError(f"unknown coverage {self.coverage!r}")
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def weight(self) -> int:
        return sum(p.weight for p in self.pairs)


@dataclass
class SeparationReport:
    size: int
    weight: int
    worst_separation: float
    worst_stability: float
    coverage_ok: bool
    multiplicity_histogram: dict
    separation_ok: bool = True
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coverage_ok and self.separation_ok


def _check_ids(S, n=None):
    if len(S) == 0:
        raise ValueError("point set must be non-empty")
    if n is not None:
        for i in S:
            if not 0 <= i < n:
                raise ValueError(f"point id {i} out of range [0, {n})")


def _check_pair_args(A, B, oracle):
    _check_ids(A, oracle.n)
    _check_ids(B, oracle.n)
    if not set(A).isdisjoint(B):
        raise ValueError("sets must be disjoint")


def set_distances(A, B, oracle: DistanceOracle):
    """Return ``(dmin, dmax)`` over all cross pairs of ``A`` and ``B``."""
    _check_pair_args(A, B, oracle)
    return oracle.min_max(list(A), list(B))


def diameter(S, oracle: DistanceOracle):
    """Largest pairwise distance inside ``S``; zero for a singleton."""
    _check_ids(S, oracle.n)
    return oracle.diameter(list(S))


def stability(A, B, oracle: DistanceOracle):
    """``(dmax - dmin) / (2 dmin)`` for the pair ``{A, B}``."""
    dmin, dmax = set_distances(A, B, oracle)
    if dmin == 0:
        raise DegeneratePairError("sets touch: minimum distance is zero")
    return (dmax - dmin) / (2 * dmin)


def is_separated(A, B, eps, mode: str = "well", oracle: DistanceOracle | None = None) -> bool:
    """Test whether ``{A, B}`` is 1/eps-well-separated or 1/eps-semi-separated.

    ``mode="well"`` bounds the larger diameter by ``eps * d(A, B)``;
    ``mode="semi"`` only the smaller one.
    """
    if mode not in ("well", "semi"):
        raise ValueError(f"unknown separation mode {mode!r}")
    dmin, _ = set_distances(A, B, oracle)
    da, db = oracle.diameter(list(A)), oracle.diameter(list(B))
    lhs = max(da, db) if mode == "well" else min(da, db)
    if oracle.exact:
        return lhs <= to_fraction(eps) * dmin
    return leq(lhs, eps * dmin, exact=False)


def spread(P: PointSet | None = None, oracle: DistanceOracle | None = None):
    """Return ``(closest_pair, diameter, diameter / closest_pair)``."""
    if oracle is None:
        oracle = DistanceOracle.from_points(P)
    n = oracle.n
    if n < 2:
        raise ValueError("spread needs at least two points")
    if oracle.exact:
        c = oracle.points.coords
        cp = min(b - a for a, b in zip(c, c[1:]))
        diam = c[-1] - c[0]
        return cp, diam, diam / cp
    m = oracle.matrix
    iu = np.triu_indices(n, 1)
    cp = float(m[iu].min())
    diam = float(m[iu].max())
    return cp, diam, diam / cp


def _check_range(k, pair, n):
    for i in pair.a + pair.b:
        if not 0 <= i < n:
            raise ValueError(f"pair {k}: point id {i} out of range [0, {n})")


def _verdict(kind, dmin, dmax, da, db, eps, exact):
    stab = (dmax - dmin) / (2 * dmin)
    if kind == "wspd":
        lhs = max(da, db)
        good = leq(lhs, eps * dmin, exact)
    elif kind == "sspd":
        lhs = min(da, db)
        good = leq(lhs, eps * dmin, exact)
    else:
        lhs = min(da, db)
        good = leq(stab, eps, exact)
    return good, float(lhs / dmin), float(stab)


def _scan_exact(pairs, oracle, eps, kind, n):
    counts = np.zeros((n, n), dtype=np.int64)
    worst_sep = worst_stab = 0.0
    bad = []
    for k, pair in enumerate(pairs):
        _check_range(k, pair, n)
        counts[np.ix_(np.asarray(pair.a), np.asarray(pair.b))] += 1
        dmin, dmax = oracle.min_max(pair.a, pair.b)
        if dmin == 0:
            raise DegeneratePairError(f"pair {k}: sides at distance zero")
        good, sep, stab = _verdict(kind, dmin, dmax, oracle.diameter(pair.a),
                                   oracle.diameter(pair.b), eps, True)
        worst_sep = max(worst_sep, sep)
        worst_stab = max(worst_stab, stab)
        if not good:
            bad.append(k)
    return counts, worst_sep, worst_stab, bad


def _block_index(flat_a, len_a, flat_b, len_b):
    """Row/col ids of every cross entry ``A_k x B_k`` plus its pair number."""
    sizes = len_a * len_b
    owner = np.repeat(np.arange(len(sizes)), sizes)
    local = np.arange(sizes.sum()) - np.repeat(np.cumsum(sizes) - sizes, sizes)
    lb = len_b[owner]
    start_a = (np.cumsum(len_a) - len_a)[owner]
    start_b = (np.cumsum(len_b) - len_b)[owner]
    return flat_a[start_a + local // lb], flat_b[start_b + local % lb], sizes


def _reduce(values, sizes, ufunc, empty):
    out = np.full(len(sizes), empty)
    nz = sizes > 0
    if nz.any():
        starts = (np.cumsum(sizes) - sizes)[nz]
        out[nz] = ufunc.reduceat(values, starts)
    return out


_CHUNK = 4_000_000  # cross entries per vectorized batch


def _scan_float(pairs, M, eps, kind, n):
    counts = np.zeros(n * n, dtype=np.int64)
    worst_sep = worst_stab = 0.0
    bad = []
    k0 = 0
    while k0 < len(pairs):
        # grow a batch until its cross and diameter blocks get large
        k1, load = k0, 0
        while k1 < len(pairs) and (k1 == k0 or load < _CHUNK):
            la, lb = len(pairs[k1].a), len(pairs[k1].b)
            load += la * lb + la * la + lb * lb
            k1 += 1
        batch = pairs[k0:k1]
        len_a = np.fromiter((len(p.a) for p in batch), dtype=np.int64, count=len(batch))
        len_b = np.fromiter((len(p.b) for p in batch), dtype=np.int64, count=len(batch))
        flat_a = np.fromiter((i for p in batch for i in p.a), dtype=np.int64, count=int(len_a.sum()))
        flat_b = np.fromiter((i for p in batch for i in p.b), dtype=np.int64, count=int(len_b.sum()))
        for flat in (flat_a, flat_b):
            if len(flat) and (flat.min() < 0 or flat.max() >= n):
                for k, pair in enumerate(batch):
                    _check_range(k0 + k, pair, n)

        rows, cols, sizes = _block_index(flat_a, len_a, flat_b, len_b)
        np.add.at(counts, rows * n + cols, 1)
        d = M[rows, cols]
        dmin = _reduce(d, sizes, np.minimum, np.inf)
        dmax = _reduce(d, sizes, np.maximum, 0.0)
        if np.any(dmin == 0):
            k = int(np.flatnonzero(dmin == 0)[0])
            raise DegeneratePairError(f"pair {k0 + k}: sides at distance zero")
        ra, ca, sa = _block_index(flat_a, len_a, flat_a, len_a)
        da = _reduce(M[ra, ca], sa, np.maximum, 0.0)
        rb, cb, sb = _block_index(flat_b, len_b, flat_b, len_b)
        db = _reduce(M[rb, cb], sb, np.maximum, 0.0)

        stab = (dmax - dmin) / (2 * dmin)
        if kind == "wspd":
            lhs = np.maximum(da, db)
            good = lhs <= eps * dmin + REL_TOL * np.maximum(lhs, eps * dmin)
        else:
            lhs = np.minimum(da, db)
            if kind == "sspd":
                good = lhs <= eps * dmin + REL_TOL * np.maximum(lhs, eps * dmin)
            else:
                good = stab <= eps + REL_TOL * np.maximum(stab, eps)
        worst_sep = max(worst_sep, float((lhs / dmin).max()))
        worst_stab = max(worst_stab, float(stab.max()))
        bad.extend((k0 + np.flatnonzero(~good)).tolist())
        k0 = k1
    return counts.reshape(n, n), worst_sep, worst_stab, bad


def validate(P: PointSet | None, W: PairDecomposition,
             oracle: DistanceOracle | None = None, eps=None,
             max_violations: int = 10, kind: str | None = None) -> SeparationReport:
    """Brute-force check of a pair decomposition.

    Checks every pair for disjointness and for the separation notion of
    ``W.kind`` at ``eps`` (defaults to ``W.eps``): ``wspd`` requires
    1/eps-well-separation, ``sspd`` 1/eps-semi-separation, ``abc``
    eps-stability.  Global coverage of all point pairs is counted, and for
    ``coverage == "partition"`` each point pair must be covered exactly once.
    ``kind`` overrides ``W.kind``, e.g. to check an ABC as an SSPD.
    Cost is O(sum |A_i| |B_i| + |A_i|^2 + |B_i|^2).
    """
    if oracle is None:
        oracle = DistanceOracle.from_points(P)
    n = oracle.n
    eps = W.eps if eps is None else eps
    kind = W.kind if kind is None else kind
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    exact = oracle.exact
    if exact:
        eps = to_fraction(eps)
    else:
        eps = float(eps)

    if exact:
        counts, worst_sep, worst_stab, bad = _scan_exact(W.pairs, oracle, eps, kind, n)
    else:
        counts, worst_sep, worst_stab, bad = _scan_float(W.pairs, oracle.matrix, eps, kind, n)
    sep_ok = not bad
    violations = [(k, W.pairs[k]) for k in bad[:max_violations]]

    mult = np.triu(counts + counts.T, 1)[np.triu_indices(n, 1)]
    hist = Counter(mult.tolist())
    coverage_ok = 0 not in hist
    if W.coverage == "partition" and set(hist) - {1}:
        coverage_ok = False
    return SeparationReport(
        size=W.size,
        weight=W.weight,
        worst_separation=worst_sep,
        worst_stability=worst_stab,
        coverage_ok=coverage_ok,
        multiplicity_histogram=dict(sorted(hist.items())),
        separation_ok=sep_ok,
        violations=violations,
    )
