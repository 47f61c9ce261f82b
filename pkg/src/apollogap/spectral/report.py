"""Refinement schedules and the genuine / spurious / unresolved classification."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .domain import HyperbolicDomain
from .fem import assemble, boundary_mass_fraction, solve_lowest
from .mesh import build_mesh

GENUINE = "genuine"
SPURIOUS = "spurious"
UNRESOLVED = "unresolved"

DEFAULT_SCHEDULE = ((0.3, 0.05, 8.0), (0.15, 0.025, 16.0), (0.075, 0.0125, 32.0))


@dataclass
class SpectralConfig:
    schedule: tuple = DEFAULT_SCHEDULE
    stability_tol: float = 5e-3
    boundary_mass_tol: float = 0.10
    d0_widths: float = 3.0
    k_min: int = 6
    k_max: int = 200
    artificial_bc: str | None = None  # None keeps the domain's own setting

    def __post_init__(self):
        self.schedule = tuple(tuple(None if v is None else float(v) for v in step) for step in self.schedule)
        if len(self.schedule) < 3:
            raise ValueError("schedule needs at least three refinements")
        hs = [s[0] for s in self.schedule]
        if any(b >= a for a, b in zip(hs, hs[1:])):
            raise ValueError("schedule must refine h at every step")

    def to_dict(self):
        d = asdict(self)
        d["schedule"] = [list(s) for s in self.schedule]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass
class StepResult:
    h: float
    eps: float
    Y: float
    n_vertices: int
    n_triangles: int
    eigenvalues: list
    residuals: list
    exponents: list
    boundary_mass: list


@dataclass
class SpectrumReport:
    domain: dict
    kappa: float
    eigenvalues: list
    tags: list
    boundary_mass: list
    residuals: list
    drift: list
    steps: list
    config: dict
    genuine_count: int = 0
    extras: dict = field(default_factory=dict, repr=False, compare=False)

    def below(self, tag: str | None = None) -> list:
        return [
            lam for lam, t in zip(self.eigenvalues, self.tags) if lam < self.kappa and (tag is None or t == tag)
        ]

    @property
    def genuine(self) -> list:
        return self.below(GENUINE)

    @property
    def any_unresolved(self) -> bool:
        return any(t == UNRESOLVED for lam, t in zip(self.eigenvalues, self.tags) if lam < self.kappa)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("extras")
        d["steps"] = [asdict(s) if not isinstance(s, dict) else s for s in self.steps]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d) -> "SpectrumReport":
        d = dict(d)
        d["steps"] = [StepResult(**s) for s in d["steps"]]
        return cls(**d)

    def write_eigenfunctions(self, directory, stem="eigenfunction") -> list:
        """One CSV ``(vertex, x, y, value)`` per eigenvalue below ``kappa`` on the finest mesh."""
        import os

        mesh = self.extras.get("mesh")
        U = self.extras.get("vectors")
        if mesh is None or U is None:
            raise ValueError("eigenfunctions are only available on a freshly computed report")
        paths = []
        n = max(1, len(self.below()))
        for j in range(min(n, U.shape[1])):
            path = os.path.join(directory, f"{stem}_{j}.csv")
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["vertex", "x", "y", "value"])
                for i, ((x, y), u) in enumerate(zip(mesh.vertices, U[:, j])):
                    w.writerow([i, f"{x:.12g}", f"{y:.12g}", f"{u:.12g}"])
            paths.append(path)
        return paths


def _solve_step(domain, kappa, h, cfg):
    mesh = build_mesh(domain, h)
    system = assemble(mesh)
    k = min(cfg.k_min, system.size)
    while True:
        pairs = solve_lowest(system, k)
        if pairs.values[-1] >= kappa or k >= min(system.size, cfg.k_max):
            break
        k = min(2 * k, system.size, cfg.k_max)
    bm = boundary_mass_fraction(system, pairs.vectors, cfg.d0_widths)
    step = StepResult(
        h, domain.eps, domain.Y, mesh.n_vertices, mesh.n_triangles,
        pairs.values.tolist(), pairs.residuals.tolist(),
        [None if np.isnan(s) else float(s) for s in pairs.exponents], bm.tolist(),
    )
    return step, mesh, system, pairs


def classify(values, previous, boundary_mass, cfg: SpectralConfig):
    """Tags and drift (distance to the nearest eigenvalue of the previous step)."""
    tags, drift = [], []
    prev = np.asarray(previous, dtype=float)
    for lam, bm in zip(values, boundary_mass):
        d = float(np.min(np.abs(prev - lam))) if len(prev) else float("inf")
        drift.append(d)
        if bm >= cfg.boundary_mass_tol:
            tags.append(SPURIOUS)
        elif d < cfg.stability_tol:
            tags.append(GENUINE)
        else:
            tags.append(UNRESOLVED)
    return tags, drift


def spectrum_below(domain: HyperbolicDomain, kappa: float, schedule=None, config: SpectralConfig | None = None) -> SpectrumReport:
    """Eigenvalues below ``kappa`` along a refinement schedule, each tagged.

    A step is ``(h, eps, Y)``; ``eps`` or ``Y`` may be ``None`` to keep the
    domain's own truncation (used for the strip test problem).  The tag of an
    eigenvalue on the finest step is ``spurious`` if at least
    ``boundary_mass_tol`` of its mass sits within ``d0_widths`` mesh widths of
    a truncation edge, otherwise ``genuine`` if it moved less than
    ``stability_tol`` from the previous step, otherwise ``unresolved``.
    """
    cfg = config or SpectralConfig()
    if schedule is not None:
        cfg = SpectralConfig(**{**cfg.to_dict(), "schedule": schedule})
    if cfg.artificial_bc is not None:
        domain = domain.with_artificial_bc(cfg.artificial_bc)
    steps = []
    last = None
    for h, eps, Y in cfg.schedule:
        d = domain.with_truncation(domain.eps if eps is None else eps, domain.Y if Y is None else Y)
        step, mesh, system, pairs = _solve_step(d, kappa, h, cfg)
        steps.append(step)
        last = (mesh, system, pairs)
    final, prev = steps[-1], steps[-2]
    tags, drift = classify(final.eigenvalues, prev.eigenvalues, final.boundary_mass, cfg)
    genuine = sum(1 for lam, t in zip(final.eigenvalues, tags) if lam < kappa and t == GENUINE)
    mesh, system, pairs = last
    return SpectrumReport(
        domain=domain.to_dict(),
        kappa=float(kappa),
        eigenvalues=final.eigenvalues,
        tags=tags,
        boundary_mass=final.boundary_mass,
        residuals=final.residuals,
        drift=drift,
        steps=steps,
        config=cfg.to_dict(),
        genuine_count=genuine,
        extras={"mesh": mesh, "vectors": system.expand(pairs.vectors), "system": system},
    )


def convergence_order(hs, errors) -> float:
    """Least-squares slope of ``log error`` against ``log h``."""
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])
