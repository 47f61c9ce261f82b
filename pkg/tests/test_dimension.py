import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from apollogap.dimension import (
    LimitSetSample,
    apollonian_residual_sample,
    apollonian_scales,
    box_counting_dimension,
    cantor_sample,
    invert_ps,
    ps_eigenvalue,
    sample_hecke_limit_set,
)
from oracles import HECKE_DELTA


def test_ps_eigenvalue_examples():
    assert ps_eigenvalue(1.3057, 2) == pytest.approx(0.9065, abs=1e-3)
    for n in (1, 2, 3):
        assert ps_eigenvalue(n / 2, n) == n * n / 4
    assert ps_eigenvalue(1, 1) == 0
    for bad in (0, -0.1, 2.5):
        with pytest.raises(ValueError):
            ps_eigenvalue(bad, 2)


def test_invert_ps_examples():
    assert invert_ps(0.9065, 2) == pytest.approx(1.3057, abs=1e-3)
    assert invert_ps(0, 1) == 1
    assert invert_ps(1.0, 2) == 1.0
    with pytest.raises(ValueError):
        invert_ps(1.01, 2)
    with pytest.raises(ValueError):
        invert_ps(-0.1, 2)


@given(st.integers(1, 4), st.floats(0, 1))
def test_ps_round_trip(n, t):
    lam = t * n * n / 4
    assert ps_eigenvalue(invert_ps(lam, n), n) == pytest.approx(lam, abs=1e-12)


@given(st.integers(1, 4), st.floats(0.01, 0.99))
def test_ps_symmetry(n, t):
    d = t * n
    assert ps_eigenvalue(d, n) == pytest.approx(ps_eigenvalue(n - d, n), abs=1e-12)


def test_hecke_depth_one():
    s = sample_hecke_limit_set(4, depth=1, K=1)
    assert sorted(s.points.tolist()) == [-0.25, 0.0, 0.25]


def test_hecke_depth_monotone():
    a = sample_hecke_limit_set(3, depth=4, K=10, min_size=1e-6)
    b = sample_hecke_limit_set(3, depth=8, K=10, min_size=1e-6)
    assert set(a.points.tolist()) <= set(b.points.tolist())
    assert len(b) > len(a)


def test_hecke_rejects_lattice():
    for mu in (2, 1.5):
        with pytest.raises(ValueError):
            sample_hecke_limit_set(mu)


def test_hecke_sample_is_bounded_and_deterministic():
    a = sample_hecke_limit_set(3, 8, 20)
    b = sample_hecke_limit_set(3, 8, 20)
    assert np.array_equal(a.points, b.points)
    assert np.all(np.abs(a.points) <= 1)
    assert a.ambient_dim == 1


def test_cantor_and_interval():
    assert box_counting_dimension(cantor_sample(14)).delta == pytest.approx(math.log(2) / math.log(3), abs=0.02)
    assert box_counting_dimension(np.linspace(0, 1, 200_001)).delta == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("ratio,pieces", [(1 / 3, 2), (1 / 4, 3), (1 / 5, 2), (0.3, 3)])
def test_planted_self_similar(ratio, pieces):
    depth = max(8, int(math.ceil(math.log(2.0 ** -16) / math.log(ratio))))
    s = cantor_sample(depth, ratio, pieces)
    assert box_counting_dimension(s).delta == pytest.approx(math.log(pieces) / math.log(1 / ratio), abs=0.02)


def test_degenerate_sample_warns():
    s = LimitSetSample(np.full(10, 0.3), 1, "constant")
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        est = box_counting_dimension(s)
    assert est.delta == 0
    assert any("degenerate" in str(w.message) for w in rec)


def test_scale_requirements():
    with pytest.raises(ValueError):
        box_counting_dimension(cantor_sample(6), [0.1, 0.05, 0.02])
    with pytest.raises(ValueError):
        box_counting_dimension(cantor_sample(6), [0.1, 0.05, 0.02, 0.01])


@pytest.mark.parametrize("mu", sorted(HECKE_DELTA))
def test_hecke_box_dimension_against_transfer_operator(mu):
    est = box_counting_dimension(sample_hecke_limit_set(mu))
    assert 0.5 < est.delta < 1.0
    assert est.delta == pytest.approx(HECKE_DELTA[mu], abs=0.02)


@pytest.mark.parametrize("mu", [2.5, 3.0, 6.0])
def test_hecke_estimate_stable_when_K_doubles(mu):
    s = sample_hecke_limit_set(mu)
    K = s.params["K"]
    twice = sample_hecke_limit_set(mu, K=2 * K, min_size=s.params["min_size"])
    d1 = box_counting_dimension(s).delta
    d2 = box_counting_dimension(twice).delta
    assert abs(d1 - d2) < 0.01


def test_hecke_estimate_stable_when_depth_halves():
    a = box_counting_dimension(sample_hecke_limit_set(3, depth=12))
    b = box_counting_dimension(sample_hecke_limit_set(3, depth=6))
    assert abs(a.delta - b.delta) < max(a.stderr, 1e-3)


def test_apollonian_box_count():
    s = apollonian_residual_sample(1e4)
    assert s.ambient_dim == 2
    est = box_counting_dimension(s, apollonian_scales(1e4))
    assert 1.25 <= est.delta <= 1.36
    # all tangency points lie in the closed bounding disk
    assert np.all(np.hypot(s.points[:, 0], s.points[:, 1]) <= 1 + 1e-12)
