import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from apollogap.geom import inversive_product, is_tangent
from apollogap.packing import (
    DEFAULT_ROOT,
    CountProfile,
    DescartesQuadruple,
    InvalidRootError,
    circle_array,
    count_profile,
    enumerate_circles_geometric,
    enumerate_curvatures,
    fit_growth_exponent,
    geometric_thresholds,
    root_circles,
    swap,
    validate_root,
)
from oracles import APOLLONIAN_COUNTS, apollonian_count

ROOT = DescartesQuadruple(DEFAULT_ROOT)


def test_swap_examples():
    assert swap(ROOT, 3).k == (-1, 2, 2, 3)
    assert swap(ROOT, 0).k == (15, 2, 2, 3)
    assert swap(ROOT, 1).k == (-1, 6, 2, 3)
    for q in (swap(ROOT, 0), swap(ROOT, 1)):
        assert q.defect() == 0


@given(st.lists(st.integers(0, 3), min_size=1, max_size=40))
def test_swap_is_an_involution_and_keeps_descartes(word):
    q = ROOT
    for i in word:
        q = swap(q, i)
        assert q.defect() == 0
        assert swap(swap(q, i), i) == q


def test_descartes_identity_over_random_words():
    """10^5 random non-backtracking words of length up to 30, exact integers."""
    rng = np.random.default_rng(2024)
    n, L = 100_000, 30
    q = np.tile(np.array(DEFAULT_ROOT, dtype=object), (n, 1))
    last = np.full(n, -1)
    lengths = rng.integers(1, L + 1, size=n)
    for step in range(L):
        # pick a letter different from the previous one
        i = (last + rng.integers(1, 4, size=n)) % 4
        i[last < 0] = rng.integers(0, 4, size=int((last < 0).sum()))
        act = lengths > step
        rows = np.flatnonzero(act)
        s = q[rows].sum(axis=1)
        q[rows, i[rows]] = 2 * s - 3 * q[rows, i[rows]]
        last[rows] = i[rows]
    tot = q.sum(axis=1)
    sq = (q * q).sum(axis=1)
    assert all(t * t == 2 * v for t, v in zip(tot, sq))


def test_non_backtracking_swaps_never_decrease():
    """Pruning soundness: from the reduced root, every non-backtracking swap grows the entry it replaces."""
    stack = [(ROOT, -1, 0)]
    while stack:
        q, last, depth = stack.pop()
        if depth == 8:
            continue
        for i in range(4):
            if i == last:
                continue
            r = swap(q, i)
            assert r[i] >= q[i]
            stack.append((r, i, depth + 1))


def test_validate_root():
    validate_root(DEFAULT_ROOT)
    validate_root((-6, 10, 15, 19))
    for bad in [(1, 2, 3, 4), (-1, 2, 2, 2), (0, 0, 1, 1), (2, 2, 3, 15)]:
        with pytest.raises(InvalidRootError):
            validate_root(bad)
    with pytest.raises(InvalidRootError):
        validate_root((-1, 2, 2, 15))  # not reduced


def test_enumerate_curvature_examples():
    assert len(enumerate_curvatures(DEFAULT_ROOT, 1)) == 0
    assert enumerate_curvatures(DEFAULT_ROOT, 3).tolist() == [2, 2, 3, 3]
    assert len(enumerate_curvatures(DEFAULT_ROOT, 0)) == 0
    assert len(enumerate_curvatures(DEFAULT_ROOT, -5)) == 0
    with pytest.raises(InvalidRootError):
        enumerate_curvatures((1, 1, 1, 1), 10)


@pytest.mark.parametrize("T", sorted(APOLLONIAN_COUNTS))
def test_counts_match_reference(T):
    assert len(enumerate_curvatures(DEFAULT_ROOT, T)) == APOLLONIAN_COUNTS[T]
    if T <= 100:
        assert apollonian_count(T) == APOLLONIAN_COUNTS[T]


def test_enumeration_is_sorted_and_deterministic():
    a = enumerate_curvatures(DEFAULT_ROOT, 5000)
    b = enumerate_curvatures(DEFAULT_ROOT, 5000)
    assert np.array_equal(a, b)
    assert np.all(np.diff(a) >= 0)


@pytest.mark.parametrize("T", [100, 10_000])
def test_curvature_and_geometric_counts_agree(T):
    curv = enumerate_curvatures(DEFAULT_ROOT, T)
    geo = circle_array(root_circles(DEFAULT_ROOT), T)
    assert np.array_equal(np.sort(geo[:, 1]), curv)


@pytest.mark.parametrize("root", [(-2, 3, 6, 7), (-3, 4, 12, 13), (-6, 10, 15, 19)])
def test_other_roots_agree(root):
    curv = enumerate_curvatures(root, 2000)
    geo = circle_array(root_circles(root), 2000)
    assert len(curv) == len(geo)
    assert np.allclose(np.sort(geo[:, 1].astype(float)), curv, rtol=1e-9)


def test_root_circles_are_mutually_tangent():
    rc = root_circles(DEFAULT_ROOT)
    for i, a in enumerate(rc.circles):
        assert a.norm() == 1
        for b in rc.circles[i + 1:]:
            assert is_tangent(a, b)
    assert tuple(rc.curvatures.k) == DEFAULT_ROOT


def test_geometric_output_is_a_packing():
    rc = root_circles(DEFAULT_ROOT)
    circles = enumerate_circles_geometric(rc, 60)
    assert len(circles) == len(enumerate_curvatures(DEFAULT_ROOT, 60))
    outer = rc.circles[0]
    arr = np.array([c.as_tuple() for c in circles], dtype=float)
    for c in circles:
        assert c.norm() == 1
        assert float(inversive_product(outer, c)) <= -1 + 1e-12
    # pairwise interiors disjoint: product <= -1 for every distinct pair
    P = arr[:, 2:] @ arr[:, 2:].T - 0.5 * (np.outer(arr[:, 1], arr[:, 0]) + np.outer(arr[:, 0], arr[:, 1]))
    off = P[~np.eye(len(arr), dtype=bool)]
    assert np.all(off <= -1 + 1e-9)


def test_no_duplicates_up_to_word_length_8():
    rc = root_circles(DEFAULT_ROOT)
    arr = circle_array(rc, 10**9, max_depth=8)
    keys = {tuple(r) for r in arr.tolist()}
    assert len(keys) == len(arr)
    # 4 + 4 * 3^0 + ... new circles: 4 * (3^8 - 1) / 2 after the root
    assert len(arr) == 4 - 1 + 4 * (3 ** 8 - 1) // 2


def test_geometric_below_minimum_is_empty():
    assert enumerate_circles_geometric(root_circles(DEFAULT_ROOT), 1.5) == []


def test_count_profile_examples():
    assert count_profile(DEFAULT_ROOT, [1]).counts == [0]
    assert count_profile(DEFAULT_ROOT, [3]).counts == [4]
    prof = count_profile(DEFAULT_ROOT, geometric_thresholds(1e2, 1e5, 5))
    assert all(a <= b for a, b in zip(prof.counts, prof.counts[1:]))
    ratios = [np.log(n) / np.log(t) for t, n in zip(prof.thresholds, prof.counts)]
    assert abs(ratios[-1] - 1.30) < abs(ratios[0] - 1.30)


def test_fit_planted_exponent():
    Ts = geometric_thresholds(10, 1e6, 10)
    prof = CountProfile(Ts, [round(7 * t ** 1.5) for t in Ts], DEFAULT_ROOT)
    d, se = fit_growth_exponent(prof, 10)
    assert d == pytest.approx(1.5, abs=0.01)
    flat = CountProfile(Ts, [42] * len(Ts), DEFAULT_ROOT)
    assert fit_growth_exponent(flat, 10)[0] == pytest.approx(0, abs=1e-12)


def test_fit_needs_five_points():
    prof = CountProfile([1e3, 2e3, 4e3, 8e3], [1, 2, 3, 4], DEFAULT_ROOT)
    with pytest.raises(ValueError):
        fit_growth_exponent(prof, 1e3)


def test_count_profile_must_be_monotone():
    with pytest.raises(ValueError):
        CountProfile([1, 2], [3, 1], DEFAULT_ROOT)
