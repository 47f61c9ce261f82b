import json
from types import SimpleNamespace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from apollogap.gap import (
    APOLLONIAN_SCOPE_NOTE,
    FAIL,
    PASS,
    UNRESOLVED,
    GapConfig,
    GapReport,
    eigenvalue_free_bound,
    judge_hecke,
    neumann_cut_check,
    overall_status,
)
from oracles import hecke_lambda0


def fake(count, kappa=0.25):
    return SimpleNamespace(genuine_count=count, kappa=kappa)


def test_eigenvalue_free_bound_examples():
    assert eigenvalue_free_bound(1, 2)
    assert not eigenvalue_free_bound(1, 3)
    assert eigenvalue_free_bound(2, 3)
    with pytest.raises(ValueError):
        eigenvalue_free_bound(0, 1)


@given(st.integers(1, 50), st.integers(2, 60))
def test_eigenvalue_free_bound_monotone(n, m):
    if eigenvalue_free_bound(n, m):
        assert eigenvalue_free_bound(n, m - 1)
        assert eigenvalue_free_bound(n + 2, m)


def test_neumann_cut_examples(hecke_reports):
    assert neumann_cut_check(fake(1), fake(1), fake(0), 0.25)
    assert not neumann_cut_check(fake(2), fake(1), fake(0), 0.25)
    r = hecke_reports("D", 3.0)
    assert neumann_cut_check(r, r, None)
    assert neumann_cut_check(r, hecke_reports("D1"), hecke_reports("D2", 3.0), 0.25)


def test_neumann_cut_rejects_mixed_kappa():
    with pytest.raises(ValueError):
        neumann_cut_check(fake(1), fake(1, kappa=0.2), fake(0))
    with pytest.raises(ValueError):
        neumann_cut_check(fake(1), fake(1), fake(0), kappa=1.0)


def test_hecke_mu3(hecke_gap):
    rep = hecke_gap(3.0)
    m = rep.measurements
    assert m["genuine_counts"] == {"D": 1, "D1": 1, "D2": 0}
    assert m["identity_residual"] <= 0.02
    assert rep.status == PASS, rep.summary()
    assert m["lambda0"] == pytest.approx(hecke_lambda0(3.0), abs=2e-3)


def test_gap_narrows_as_mu_grows(hecke_gap):
    lam3 = hecke_gap(3.0).measurements["lambda0"]
    lam6 = hecke_gap(6.0).measurements["lambda0"]
    assert hecke_gap(6.0).measurements["genuine_counts"]["D"] == 1
    assert abs(lam6 - 0.25) < abs(lam3 - 0.25)


def test_gap_widens_near_lattice(hecke_gap):
    rep = hecke_gap(2.2)
    assert rep.measurements["lambda0"] < hecke_gap(3.0).measurements["lambda0"]


def test_hecke_rejects_lattice_and_below():
    from apollogap.gap import verify_hecke_gap

    for mu in (2.0, 1.5):
        with pytest.raises(ValueError):
            verify_hecke_gap(mu)


def test_apollonian_report(apollonian_1e6):
    rep = apollonian_1e6
    m = rep.measurements
    assert 1.29 <= m["delta_hat"] <= 1.32
    assert 0.89 <= m["lambda0_hat"] <= 0.92
    assert 1.17 <= m["eta_hat"] <= 1.20
    assert m["eta_hat"] - (3 * m["delta_hat"] / 5 + 2 / 5) == 0
    assert APOLLONIAN_SCOPE_NOTE in rep.notes
    assert rep.status == PASS, rep.summary()


def test_apollonian_needs_enough_range():
    from apollogap.gap import apollonian_report

    with pytest.raises(ValueError):
        apollonian_report(1e3)


def test_rejudge_is_pure(hecke_gap, apollonian_1e6):
    for rep in (hecke_gap(3.0), apollonian_1e6):
        back = GapReport.from_json(rep.to_json())
        assert back.rejudge().criteria == rep.criteria
        assert back.rejudge().to_json() == rep.to_json()


def test_verdicts_follow_tolerances(hecke_gap):
    rep = hecke_gap(3.0)
    d = json.loads(rep.to_json())
    d["tolerances"]["identity_tol"] = 1e-9
    strict = GapReport(**d).rejudge()
    assert strict.criteria["identity_residual"]["status"] == FAIL
    assert strict.status == FAIL


def test_unresolved_is_never_a_pass():
    m = {
        "genuine_counts": {"D": 0, "D1": 1, "D2": 0},
        "unresolved_below": {"D": True, "D1": False, "D2": False},
        "d1_genuine": [0.0],
        "eigenvalue_free_bound_1_2": True,
        "lambda0": None,
        "ps_lambda0": 0.18,
        "delta_box": 0.75,
        "delta_box_K_doubled_change": 0.0,
        "identity_residual": None,
    }
    tol = {"identity_tol": 0.02, "selberg_window": [0.01, 0.24], "k_stability_tol": 0.01}
    crit = judge_hecke(m, tol)
    assert crit["unique_base_eigenvalue"]["status"] == UNRESOLVED
    assert overall_status(crit) == UNRESOLVED


def test_config_round_trip():
    cfg = GapConfig(identity_tol=0.01, kappa=0.2)
    back = GapConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert back.to_dict() == cfg.to_dict()
