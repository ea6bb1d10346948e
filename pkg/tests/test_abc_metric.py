import math
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pairdecomp.abc_metric import (
    build_abc_metric,
    build_abc_spread,
    removal_order,
    ring_count,
)
from pairdecomp.core import DistanceOracle, PointSet, diameter, set_distances, spread, validate


def random_cloud(rng, n, d=3):
    return PointSet.euclidean(rng.random((n, d)))


def check_abc(P, W, eps, trace=None):
    O = DistanceOracle.from_points(P)
    rep = validate(P, W, oracle=O)
    assert rep.ok, rep.violations[:3]
    assert rep.multiplicity_histogram == {1: comb(P.n, 2)}
    assert validate(P, W, oracle=O, kind="sspd").ok
    for pair in W.pairs:
        # the side that began as a singleton is the semi-separation witness
        dmin, _ = set_distances(pair.a, pair.b, O)
        assert diameter(pair.a, O) <= eps * dmin * (1 + 1e-9)
    if trace is not None:
        assert [p.freeze() for p in trace] == list(W.pairs)
        for p in trace:
            assert (p.d0_max - p.d0_min) / (2 * p.d0_min) <= eps / 8 * (1 + 1e-12)


def test_two_points():
    P = PointSet.line([0, 5])
    W = build_abc_metric(DistanceOracle.from_points(P), 2, 0.25)
    assert W.size == 1 and W.pairs[0].weight == 2


def test_ring_count():
    assert ring_count(50, 0.25) == 4 + math.ceil(128 * math.log(50))


def test_eps_range():
    P = PointSet.line([0, 1, 3])
    for eps in (0, 0.5, 0.7, -1):
        with pytest.raises(ValueError):
            build_abc_metric(P, 3, eps)
    with pytest.raises(ValueError):
        build_abc_spread(P, 3, 1.0)


def test_removal_order_certified(rng):
    X = rng.random((40, 2))
    D = np.linalg.norm(X[:, None] - X[None], axis=2)
    order = removal_order(D)
    alive = set(range(40))
    for p, q, ell in zip(order.removed, order.partner, order.ell):
        sub = sorted(alive)
        block = D[np.ix_(sub, sub)] + np.diag([np.inf] * len(sub))
        assert ell == pytest.approx(block.min())
        assert D[p, q] == ell and q in alive and p != q
        alive.remove(p)
    assert set(order.base) == alive and len(alive) == 2


def test_powers_of_six_singleton_sides():
    n = 12
    P = PointSet.euclidean([6.0**i for i in range(1, n + 1)])
    W = build_abc_metric(P, n, 0.4)
    check_abc(P, W, 0.4)
    assert all(min(len(p.a), len(p.b)) == 1 for p in W.pairs)


def test_random_cloud_size_bound(rng):
    P = random_cloud(rng, 50)
    trace = []
    W = build_abc_metric(DistanceOracle.from_points(P), 50, 0.25, trace=trace)
    check_abc(P, W, 0.25, trace)
    assert W.size <= 40 / 0.25 * 50 * math.log(50)
    assert W.size <= 50 * ring_count(50, 0.25)


def test_explicit_matrix_input(rng):
    X = rng.random((25, 2))
    D = np.linalg.norm(X[:, None] - X[None], axis=2)
    W = build_abc_metric(DistanceOracle.from_matrix(D), 25, 0.3)
    rep = validate(None, W, oracle=DistanceOracle.from_matrix(D))
    assert rep.ok and rep.multiplicity_histogram == {1: comb(25, 2)}


def test_far_points_registered():
    # spread far above n^4 forces registration through the nearest survivor
    pts = [0.0, 1.0, 1e9, 1e9 + 3.0, 5e9]
    P = PointSet.euclidean(pts)
    W = build_abc_metric(P, 5, 0.2)
    check_abc(P, W, 0.2)
    assert any(len(p.a) > 1 for p in W.pairs)


def test_spread_examples():
    P = PointSet.line(range(1, 17))
    O = DistanceOracle.from_points(P)
    W = build_abc_spread(O, 16, 0.5)
    check_abc(P, W, 0.5)
    phi = spread(P, O)[2]
    assert W.size <= 40 / 0.5 * 16 * math.log(phi)
    two = PointSet.line([3, 4])
    assert build_abc_spread(two, 2, 0.5).size == 1


def test_spread_grid():
    g = np.array([(i, j) for i in range(8) for j in range(8)], dtype=float)
    P = PointSet.euclidean(g)
    trace = []
    W = build_abc_spread(P, 64, 0.25, trace=trace)
    check_abc(P, W, 0.25, trace)


@settings(max_examples=25)
@given(st.integers(3, 30), st.sampled_from([0.1, 0.25, 0.4]), st.integers(0, 2**32 - 1))
def test_random_metrics(n, eps, seed):
    P = random_cloud(np.random.default_rng(seed), n, 2)
    trace = []
    W = build_abc_metric(P, n, eps, trace=trace)
    check_abc(P, W, eps, trace)
    assert W.size <= n * ring_count(n, eps)
