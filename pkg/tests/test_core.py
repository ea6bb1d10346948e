import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pairdecomp.core import (
    DegeneratePairError,
    DistanceOracle,
    Pair,
    PairDecomposition,
    PointSet,
    diameter,
    is_separated,
    set_distances,
    spread,
    stability,
    to_fraction,
    validate,
)

from conftest import line_sets

# a lattice pair with dmin 6, dmax 10 and both diameters sqrt(37)
FIG_B = [(0, 0), (1, 6)]
FIG_C = [(-7, 0), (-6, 6), (-6, 0)]


@pytest.fixture
def figure_pair():
    P = PointSet.euclidean(FIG_B + FIG_C)
    return DistanceOracle.from_points(P), (0, 1), (2, 3, 4)


def test_to_fraction_parses_decimals_exactly():
    assert to_fraction("0.1") == Fraction(1, 10)
    assert to_fraction(3) == 3
    assert to_fraction(0.5) == Fraction(1, 2)
    with pytest.raises(ValueError):
        to_fraction(float("nan"))


def test_line_pointset_sorted_and_distinct():
    P = PointSet.line([3, 1, 2])
    assert P.coords == (1, 2, 3)
    with pytest.raises(DegeneratePairError):
        PointSet.line([1, 2, 1])
    with pytest.raises(DegeneratePairError):
        PointSet.euclidean([[0, 0], [0, 0]])


def test_matrix_oracle_checks():
    m = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    DistanceOracle.from_matrix(m)
    with pytest.raises(ValueError, match="triangle"):
        DistanceOracle.from_matrix(m, check_triangle=True)
    with pytest.raises(ValueError):
        DistanceOracle.from_matrix([[0, 1], [2, 0]])


def test_set_distances_examples(figure_pair):
    P = PointSet.line(range(0, 11))
    O = DistanceOracle.from_points(P)
    assert set_distances([0], [10], O) == (10, 10)
    # ids of values 1, 2 and 5, 9
    assert set_distances([1, 2], [5, 9], O) == (3, 8)
    O2, B, C = figure_pair
    dmin, dmax = set_distances(B, C, O2)
    assert dmin == pytest.approx(6) and dmax == pytest.approx(10)
    with pytest.raises(ValueError):
        set_distances([], [1], O)


def test_diameter_examples(figure_pair):
    P = PointSet.line([1, 4, 6])
    O = DistanceOracle.from_points(P)
    assert diameter([0], O) == 0
    assert diameter([0, 1, 2], O) == 5
    O2, B, C = figure_pair
    assert diameter(B, O2) == pytest.approx(math.sqrt(37))
    assert diameter(C, O2) == pytest.approx(math.sqrt(37))
    with pytest.raises(ValueError):
        diameter([], O)


def test_stability_examples(figure_pair):
    O2, B, C = figure_pair
    assert stability(B, C, O2) == pytest.approx(1 / 3)
    O = DistanceOracle.from_points(PointSet.line([0, 10, 12]))
    assert stability([0], [1, 2], O) == Fraction(1, 10)
    assert stability([0], [1], O) == 0


def test_stability_degenerate():
    m = np.array([[0, 1, 1], [1, 0, 2], [1, 2, 0]], dtype=float)
    O = DistanceOracle.from_matrix(m)
    with pytest.raises(ValueError):
        stability([0], [0, 1], O)


def test_figure_pair_separation(figure_pair):
    # sqrt(37) > 6: neither well- nor semi-separated at eps = 1, yet 1/3-stable
    O2, B, C = figure_pair
    assert not is_separated(B, C, 1, "well", O2)
    assert not is_separated(B, C, 1, "semi", O2)
    assert is_separated(B, C, Fraction(37, 36) ** 0.5 + 1e-6, "semi", O2)


def test_is_separated_line_examples():
    O = DistanceOracle.from_points(PointSet.line([0, 1, 10, 20]))
    assert is_separated([0], [3], 1, "well", O)
    # {0,1} vs {10}: diameter 1 against 0.05 * 9
    assert not is_separated([0, 1], [2], Fraction(1, 20), "well", O)
    assert is_separated([0, 1], [2], Fraction(1, 20), "semi", O)
    with pytest.raises(ValueError):
        is_separated([0], [1], 1, "loose", O)


def test_spread_examples():
    for pts, want in [([0, 1], (1, 1, 1)), ([1, 2, 4, 8], (1, 7, 7)), (range(1, 9), (1, 7, 7))]:
        P = PointSet.line(pts)
        assert spread(P, DistanceOracle.from_points(P)) == want
    with pytest.raises(ValueError):
        spread(PointSet.line([1]), None)


def test_validate_singletons():
    P = PointSet.line([1, 2, 3])
    W = PairDecomposition([Pair((i,), (j,)) for i, j in combinations(range(3), 2)], 1, "wspd", "partition")
    rep = validate(P, W)
    assert rep.coverage_ok and rep.size == 3 and rep.weight == 6
    assert rep.multiplicity_histogram == {1: 3}


def test_validate_intro_example():
    # p_i = (i, (4/eps)^i): prefixes against the next point form a WSPD of size n - 1
    eps, n = 0.5, 7
    P = PointSet.euclidean([(i, (4 / eps) ** i) for i in range(1, n + 1)])
    W = PairDecomposition([Pair(tuple(range(i + 1)), (i + 1,)) for i in range(n - 1)], eps, "wspd", "partition")
    rep = validate(P, W)
    assert rep.ok and rep.size == n - 1


def test_validate_detects_missing_pair():
    P = PointSet.line([1, 2, 3, 4])
    pairs = [Pair((i,), (j,)) for i, j in combinations(range(4), 2)]
    rep = validate(P, PairDecomposition(pairs[1:], 1, "wspd", "cover"))
    assert not rep.coverage_ok and rep.multiplicity_histogram[0] == 1


def test_validate_detects_double_cover_in_partition():
    P = PointSet.line([1, 2, 3])
    pairs = [Pair((0,), (1,)), Pair((0,), (1, 2)), Pair((1,), (2,))]
    assert validate(P, PairDecomposition(pairs, 1, "wspd", "cover")).coverage_ok
    assert not validate(P, PairDecomposition(pairs, 1, "wspd", "partition")).coverage_ok


def test_validate_out_of_range():
    P = PointSet.line([1, 2])
    with pytest.raises(ValueError):
        validate(P, PairDecomposition([Pair((0,), (5,))], 1))


def test_pair_invariants():
    with pytest.raises(ValueError):
        Pair((0, 1), (1, 2))
    with pytest.raises(ValueError):
        Pair((), (1,))


@given(line_sets(min_size=3, max_size=9), st.data())
def test_separation_implications(P, data):
    # well => semi, and well => eps-stable
    O = DistanceOracle.from_points(P)
    ids = list(range(P.n))
    A = data.draw(st.lists(st.sampled_from(ids), min_size=1, max_size=min(3, P.n - 1), unique=True))
    rest = [i for i in ids if i not in A]
    B = data.draw(st.lists(st.sampled_from(rest), min_size=1, max_size=3, unique=True))
    eps = data.draw(st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2)]))
    if is_separated(A, B, eps, "well", O):
        assert is_separated(A, B, eps, "semi", O)
        assert stability(A, B, O) <= eps


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=3, max_size=7, unique=True), st.data())
def test_stability_matches_ratio(pts, data):
    P = PointSet.euclidean(pts)
    O = DistanceOracle.from_points(P)
    if O.matrix[~np.eye(P.n, dtype=bool)].min() < 1e-6:
        return
    k = data.draw(st.integers(1, P.n - 1))
    A, B = list(range(k)), list(range(k, P.n))
    dmin, dmax = set_distances(A, B, O)
    assert stability(A, B, O) == pytest.approx((dmax / dmin - 1) / 2, rel=1e-9)


@given(line_sets(max_size=7))
def test_float_and_exact_validation_agree(P):
    # the vectorized float scan and the exact scan give the same verdicts
    pairs = [Pair((i,), tuple(range(i + 1, P.n))) for i in range(P.n - 1)]
    for kind in ("wspd", "sspd", "abc"):
        W = PairDecomposition(pairs, Fraction(1, 2), kind, "partition")
        exact = validate(P, W)
        Q = PointSet.euclidean([float(c) for c in P.coords])
        approx = validate(Q, W)
        assert exact.coverage_ok == approx.coverage_ok
        assert exact.separation_ok == approx.separation_ok
        assert float(exact.worst_stability) == pytest.approx(approx.worst_stability)
