"""Checks tying packing counts, limit-set dimension and FEM spectra together.

Every verdict in a :class:`GapReport` is recomputed from its stored
measurements and tolerances by a pure function, so a serialized report can
be re-judged and gives the same answer.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from . import dimension, packing
from .spectral import SpectralConfig, hecke_D, hecke_D1, hecke_D2, spectrum_below

PASS = "pass"
FAIL = "fail"
UNRESOLVED = "unresolved"

APOLLONIAN_SCOPE_NOTE = (
    "Uniqueness of the base eigenvalue on the three-dimensional Apollonian quotient is taken "
    "as a published theorem and not recomputed; only its numeric consequences through the "
    "growth exponent are checked here."
)


def eigenvalue_free_bound(n: int, m: int) -> bool:
    """Whether ``m`` geodesic hyperplanes in ``H^(n+1)`` bound a Neumann region with no eigenvalue below ``(n/2)^2``."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return m <= (n + 4) // 2


def _count(report) -> int:
    return 0 if report is None else int(report.genuine_count)


def neumann_cut_check(reportD, reportD1, reportD2, kappa: float | None = None) -> bool:
    """Counting inequality for a Neumann cut: ``#D <= #D1 + #D2`` (genuine eigenvalues below ``kappa``).

    A missing partner (``None``) counts as zero eigenvalues.
    """
    kappas = {float(r.kappa) for r in (reportD, reportD1, reportD2) if r is not None}
    if kappa is not None:
        kappas.add(float(kappa))
    if len(kappas) > 1:
        raise ValueError(f"reports were computed for different kappa values: {sorted(kappas)}")
    return _count(reportD) <= _count(reportD1) + _count(reportD2)


@dataclass
class GapConfig:
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    kappa: float = 0.25
    identity_tol: float = 0.02
    selberg_window: tuple = (0.01, 0.24)
    k_stability_tol: float = 0.01
    hecke_depth: int = 12
    hecke_K: int | None = None
    hecke_min_size: float | None = None
    box_scales: tuple = dimension.DEFAULT_SCALES
    root: tuple = packing.DEFAULT_ROOT
    fit_tmin: float = 1e3
    per_decade: int = 10
    delta_interval: tuple = (1.29, 1.32)
    lambda0_interval: tuple = (0.89, 0.92)
    eta_interval: tuple = (1.17, 1.20)
    box_T: float = 1e4
    box_interval: tuple = (1.25, 1.36)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spectral"] = self.spectral.to_dict()
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d) -> "GapConfig":
        d = dict(d)
        if "spectral" in d and not isinstance(d["spectral"], SpectralConfig):
            d["spectral"] = SpectralConfig.from_dict(d["spectral"])
        for k in ("selberg_window", "box_scales", "root", "delta_interval", "lambda0_interval", "eta_interval", "box_interval"):
            if k in d and d[k] is not None:
                d[k] = tuple(d[k])
        return cls(**d)


@dataclass
class GapReport:
    case: str
    measurements: dict
    tolerances: dict
    criteria: dict
    status: str
    notes: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    timestamp: str = ""
    spectra: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_json(cls, text: str) -> "GapReport":
        return cls(**json.loads(text))

    def rejudge(self) -> "GapReport":
        """A copy with verdicts recomputed from the stored measurements."""
        judge = _JUDGES[self.case.split(":")[0]]
        crit = judge(self.measurements, self.tolerances)
        d = self.to_dict()
        d.update(criteria=crit, status=overall_status(crit))
        return GapReport(**d)

    def summary(self) -> str:
        width = max(len(k) for k in self.criteria) if self.criteria else 10
        lines = [f"{self.case}: {self.status.upper()}"]
        for name, c in self.criteria.items():
            lines.append(f"  {name:<{width}}  {c['status']:<10}  {c['detail']}")
        return "\n".join(lines)


def overall_status(criteria: dict) -> str:
    states = [c["status"] for c in criteria.values()]
    if FAIL in states:
        return FAIL
    if UNRESOLVED in states:
        return UNRESOLVED
    return PASS


def _within(x, lo, hi):
    return x is not None and lo <= x <= hi


def _crit(ok, detail, unresolved=False):
    return {"status": UNRESOLVED if unresolved else (PASS if ok else FAIL), "detail": detail}


def judge_hecke(m: dict, tol: dict) -> dict:
    """Verdicts for a Hecke case from its measurements."""
    out = {}
    gD, gD1, gD2 = m["genuine_counts"]["D"], m["genuine_counts"]["D1"], m["genuine_counts"]["D2"]
    unres = m["unresolved_below"]
    out["unique_base_eigenvalue"] = _crit(gD == 1, f"genuine count on D = {gD}", unresolved=unres["D"] and gD != 1)
    cut_ok = gD <= gD1 + gD2
    out["neumann_cut"] = _crit(cut_ok, f"{gD} <= {gD1} + {gD2}", unresolved=not cut_ok and (unres["D1"] or unres["D2"]))
    d2_ok = m["eigenvalue_free_bound_1_2"] and gD2 == 0
    out["d2_eigenvalue_free"] = _crit(d2_ok, f"two walls, genuine count on D2 = {gD2}", unresolved=unres["D2"] and not d2_ok)
    lo, hi = tol["selberg_window"]
    inside = [lam for lam in m["d1_genuine"] if lo < lam < hi]
    out["d1_no_small_eigenvalue"] = _crit(not inside, f"genuine eigenvalues of D1 in ({lo}, {hi}): {inside}")
    delta = m["delta_box"]
    out["delta_above_half"] = _crit(0.5 < delta < 1.0, f"delta_box = {delta:.5f}")
    kd = m["delta_box_K_doubled_change"]
    out["box_K_stability"] = _crit(kd <= tol["k_stability_tol"], f"|delta(2K) - delta(K)| = {kd:.2e}")
    r = m["identity_residual"]
    if r is None:
        out["identity_residual"] = _crit(False, "no base eigenvalue on D", unresolved=True)
    else:
        out["identity_residual"] = _crit(r <= tol["identity_tol"], f"|{m['lambda0']:.5f} - {m['ps_lambda0']:.5f}| = {r:.2e}")
    return out


def judge_apollonian(m: dict, tol: dict) -> dict:
    out = {}
    d, lam, eta = m["delta_hat"], m["lambda0_hat"], m["eta_hat"]
    out["delta_interval"] = _crit(_within(d, *tol["delta_interval"]), f"delta_hat = {d:.5f} (stderr {m['delta_stderr']:.1e})")
    out["lambda0_interval"] = _crit(_within(lam, *tol["lambda0_interval"]), f"lambda0_hat = {lam:.5f}")
    out["eta_interval"] = _crit(_within(eta, *tol["eta_interval"]), f"eta_hat = {eta:.5f}")
    res = m["eta_affine_residual"]
    out["eta_affine_identity"] = _crit(res <= 4 * 2.0 ** -52, f"residual = {res:.1e}")
    if m.get("delta_box") is not None:
        out["box_sanity_band"] = _crit(_within(m["delta_box"], *tol["box_interval"]), f"delta_box = {m['delta_box']:.4f}")
    return out


_JUDGES = {"hecke": judge_hecke, "apollonian": judge_apollonian}


def _now():
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def hecke_dimension(mu: float, config: GapConfig) -> tuple:
    """Box-count dimension of the sampled limit set and its change when ``K`` doubles."""
    sample = dimension.sample_hecke_limit_set(mu, config.hecke_depth, config.hecke_K, config.hecke_min_size)
    est = dimension.box_counting_dimension(sample, config.box_scales)
    K = sample.params["K"]
    twice = dimension.sample_hecke_limit_set(mu, config.hecke_depth, 2 * K, sample.params["min_size"])
    est2 = dimension.box_counting_dimension(twice, config.box_scales)
    return est, abs(est2.delta - est.delta), sample


def verify_hecke_gap(mu: float, config: GapConfig | None = None) -> GapReport:
    """FEM spectra on the Hecke half-domain and its cut, cross-checked against the limit set."""
    if not mu > 2:
        raise ValueError(f"mu must exceed 2, got {mu}")
    cfg = config or GapConfig()
    kappa = cfg.kappa
    reps = {
        "D": spectrum_below(hecke_D(mu), kappa, config=cfg.spectral),
        "D1": spectrum_below(hecke_D1(), kappa, config=cfg.spectral),
        "D2": spectrum_below(hecke_D2(mu), kappa, config=cfg.spectral),
    }
    est, kchange, sample = hecke_dimension(mu, cfg)
    genuine_D = reps["D"].genuine
    lam0 = genuine_D[0] if genuine_D else (reps["D"].below()[0] if reps["D"].below() else None)
    ps = dimension.ps_eigenvalue(est.delta, 1)
    m = {
        "mu": mu,
        "kappa": kappa,
        "genuine_counts": {k: r.genuine_count for k, r in reps.items()},
        "unresolved_below": {k: r.any_unresolved for k, r in reps.items()},
        "d1_genuine": reps["D1"].genuine,
        "eigenvalue_free_bound_1_2": eigenvalue_free_bound(1, 2),
        "lambda0": lam0,
        "delta_box": est.delta,
        "delta_box_stderr": est.stderr,
        "delta_box_K_doubled_change": kchange,
        "sample_size": len(sample),
        "sample_K": sample.params["K"],
        "ps_lambda0": ps,
        "identity_residual": None if lam0 is None else abs(lam0 - ps),
        "delta_estimates": [{"method": est.method, "delta": est.delta, "stderr": est.stderr}],
    }
    tol = {"identity_tol": cfg.identity_tol, "selberg_window": list(cfg.selberg_window), "k_stability_tol": cfg.k_stability_tol}
    crit = judge_hecke(m, tol)
    return GapReport(
        case=f"hecke:mu={mu:g}",
        measurements=m,
        tolerances=tol,
        criteria=crit,
        status=overall_status(crit),
        config=cfg.to_dict(),
        timestamp=_now(),
        spectra={k: r.to_dict() for k, r in reps.items()},
    )


def apollonian_report(Tmax: float = 1e6, config: GapConfig | None = None, box: bool = True) -> GapReport:
    """Growth exponent of the packing and the numbers it implies on the 3-dimensional side."""
    if Tmax < 1e4:
        raise ValueError("Tmax must be at least 1e4")
    cfg = config or GapConfig()
    Ts = packing.geometric_thresholds(cfg.fit_tmin, Tmax, cfg.per_decade)
    profile = packing.count_profile(cfg.root, Ts)
    delta, stderr = packing.fit_growth_exponent(profile, cfg.fit_tmin)
    lam = dimension.ps_eigenvalue(delta, 2)
    eta = 3 * delta / 5 + 2 / 5
    m = {
        "Tmax": Tmax,
        "root": list(cfg.root),
        "delta_hat": delta,
        "delta_stderr": stderr,
        "lambda0_hat": lam,
        "eta_hat": eta,
        "eta_affine_residual": abs(eta - (0.6 * delta + 0.4)),
        "N_Tmax": profile.counts[-1],
        "delta_estimates": [{"method": "growth-fit", "delta": delta, "stderr": stderr}],
        "delta_box": None,
    }
    if box:
        sample = dimension.apollonian_residual_sample(cfg.box_T, cfg.root)
        est = dimension.box_counting_dimension(sample, dimension.apollonian_scales(cfg.box_T))
        m["delta_box"] = est.delta
        m["delta_estimates"].append({"method": est.method, "delta": est.delta, "stderr": est.stderr})
    tol = {
        "delta_interval": list(cfg.delta_interval),
        "lambda0_interval": list(cfg.lambda0_interval),
        "eta_interval": list(cfg.eta_interval),
        "box_interval": list(cfg.box_interval),
    }
    crit = judge_apollonian(m, tol)
    return GapReport(
        case=f"apollonian:Tmax={Tmax:g}",
        measurements=m,
        tolerances=tol,
        criteria=crit,
        status=overall_status(crit),
        notes=[APOLLONIAN_SCOPE_NOTE],
        config=cfg.to_dict(),
        timestamp=_now(),
    )
