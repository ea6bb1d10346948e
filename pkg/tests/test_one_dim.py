from fractions import Fraction
from itertools import combinations
from math import comb, log

import pytest
from hypothesis import given, strategies as st

from pairdecomp.core import PointSet, validate
from pairdecomp.exact_oracle import brute_min_cover
from pairdecomp.one_dim import (
    CoverSegmentTree,
    GridPoint,
    Lifting,
    ShadowSquare,
    SquareCover,
    ck_wspd_1d,
    cleanup,
    cover_to_decomposition,
    covered,
    fair_split_tree,
    greedy_cover,
    lift,
    maximal_pairs,
    sweep3_cover,
    validate_cover,
    vicinity,
)

from conftest import eps_values, line_sets

P013 = PointSet.line([0, 1, 3])


def uniform(n):
    return PointSet.line(range(1, n + 1))


# -- lifting --------------------------------------------------------------


def test_lift_examples():
    assert [(g.x, g.y) for g in lift(PointSet.line([1, 2]))] == [(1, 2)]
    assert [(g.x, g.y) for g in lift(P013)] == [(0, 1), (0, 3), (1, 3)]
    assert len(lift(uniform(10))) == 45


def test_grid_point_above_diagonal():
    with pytest.raises(ValueError):
        GridPoint(1, 0, Fraction(1), Fraction(0))


def test_maximal_pairs_examples():
    (s,) = maximal_pairs(PointSet.line([0, 1]), 1)
    assert s.extent == ((-1, 0), (1, 2))
    assert sorted(s.tau for s in maximal_pairs(P013, 1)) == [1, 2, 3]
    assert len(maximal_pairs(uniform(40), 1)) == 780


def test_shadow_square_is_well_separated():
    s = ShadowSquare(Fraction(2), Fraction(7), Fraction(1, 3))
    (x1, x2), (y1, y2) = s.extent
    assert max(x2 - x1, y2 - y1) == s.eps * (y1 - x2)
    with pytest.raises(ValueError):
        ShadowSquare(3, 3, 1)


def test_covered_examples():
    Q = lift(P013)
    assert covered(ShadowSquare(1, 3, 1), Q) == {(0, 2), (1, 2)}
    assert covered(ShadowSquare(0, 1, 1), Q) == {(0, 1)}
    assert covered(ShadowSquare(0, 1, 1), []) == set()


def test_vicinity_examples():
    Q = lift(P013)
    p = next(g for g in Q if (g.x, g.y) == (0, 3))
    assert vicinity(p, 1, Q) == {(0, 2), (1, 2)}
    # far apart scales: the small pair shares no square at eps = 1/10
    Q2 = lift(PointSet.line([0, 1, 100]))
    lone = next(g for g in Q2 if (g.x, g.y) == (0, 1))
    assert vicinity(lone, Fraction(1, 10), Q2) == {(0, 1)}


@given(line_sets(max_size=6), eps_values)
def test_vicinity_symmetric(P, eps):
    Q = lift(P)
    by_id = {(g.i, g.j): g for g in Q}
    for g in Q:
        for h in vicinity(g, eps, Q):
            assert (g.i, g.j) in vicinity(by_id[h], eps, Q)


@given(line_sets(max_size=7), eps_values)
def test_lifting_boxes_match_membership(P, eps):
    # index boxes agree with direct closed-square membership
    L = Lifting(P, eps)
    Q = lift(P)
    for s in maximal_pairs(P, eps):
        box = L.box(s)
        got = set()
        if box is not None:
            xlo, xhi, ylo, yhi = box
            got = {(i, j) for i in range(xlo, xhi + 1) for j in range(ylo, yhi + 1)}
        assert got == covered(s, Q)


# -- greedy / sweep / cleanup ---------------------------------------------


def test_greedy_examples():
    assert len(greedy_cover(uniform(10), 1)) == 12
    assert len(greedy_cover(PointSet.line([0, 1]), 1)) == 1
    assert len(greedy_cover(P013, 1)) == 2


def test_sweep3_examples():
    assert len(sweep3_cover(uniform(10), 1)) == 14
    assert len(sweep3_cover(uniform(20), 1)) == 38
    assert len(sweep3_cover(PointSet.line([0, 1]), 1)) == 1


def test_cleanup_examples():
    P = uniform(10)
    assert len(cleanup(sweep3_cover(P, 1), P)) == 12
    # published value 72; sweep snapping details shift it slightly
    P40 = uniform(40)
    assert abs(len(cleanup(sweep3_cover(P40, 1), P40)) - 72) <= 2
    small = greedy_cover(P013, 1)
    assert len(cleanup(small, P013)) == len(small)


def test_cleanup_rejects_invalid_cover():
    P = uniform(5)
    cover = greedy_cover(P, 1)
    with pytest.raises(ValueError):
        cleanup(SquareCover(cover.squares[1:], 1), P)


@given(line_sets(max_size=7), eps_values)
def test_covers_valid_and_bounded(P, eps):
    g = greedy_cover(P, eps)
    s = sweep3_cover(P, eps)
    c = cleanup(s, P)
    for cover in (g, s, c):
        assert validate_cover(P, cover)
        assert validate(P, cover_to_decomposition(P, cover)).ok
    assert len(c) <= len(s)
    opt = brute_min_cover(P, eps) if comb(P.n, 2) <= 15 else None
    if opt is not None:
        assert len(s) <= 3 * opt
        assert len(g) <= opt * (1 + log(comb(P.n, 2)))


def test_greedy_deterministic():
    P = PointSet.line([0, 2, 3, 7, 11, 12])
    assert greedy_cover(P, "1/2").squares == greedy_cover(P, "1/2").squares


# -- segment tree ---------------------------------------------------------


@given(st.integers(1, 20), st.lists(st.tuples(st.booleans(), st.integers(0, 19), st.integers(0, 19)), max_size=30))
def test_segment_tree_against_counts(size, ops):
    tree = CoverSegmentTree(size)
    counts = [0] * size
    live = []
    for add, a, b in ops:
        lo, hi = min(a, b) % size, max(a, b) % size
        lo, hi = min(lo, hi), max(lo, hi)
        if add or not live:
            tree.insert(lo, hi)
            live.append((lo, hi))
            for k in range(lo, hi + 1):
                counts[k] += 1
        else:
            lo, hi = live.pop()
            tree.delete(lo, hi)
            for k in range(lo, hi + 1):
                counts[k] -= 1
        first = next((k for k in range(size) if counts[k] == 0), None)
        assert tree.first_uncovered() == first
        assert [tree.covered(k) for k in range(size)] == [c > 0 for c in counts]


# -- Callahan-Kosaraju ------------------------------------------------------


def test_ck_examples():
    assert ck_wspd_1d(uniform(10), 1).size == 15
    assert ck_wspd_1d(PointSet.line([0, 1]), 1).size == 1
    assert validate(P013, ck_wspd_1d(P013, 1)).ok


def test_fair_split_tree_shape():
    root = fair_split_tree(uniform(9))
    leaves = []

    def walk(v):
        if v.is_leaf:
            leaves.append(v.lo)
            assert v.lo == v.hi
            return
        assert v.left.hi + 1 == v.right.lo
        walk(v.left)
        walk(v.right)

    walk(root)
    assert leaves == list(range(9))
    # {1..9}: midpoint 5 goes left
    assert (root.left.lo, root.left.hi) == (0, 4)


@given(line_sets(max_size=8), eps_values)
def test_ck_partition_and_oracle(P, eps):
    W = ck_wspd_1d(P, eps)
    rep = validate(P, W)
    assert rep.ok and rep.multiplicity_histogram == {1: comb(P.n, 2)}
    if comb(P.n, 2) <= 15:
        assert W.size >= brute_min_cover(P, eps)
