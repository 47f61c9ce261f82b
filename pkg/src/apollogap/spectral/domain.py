"""Upper half-plane regions bounded by geodesic walls."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate

NEUMANN = "neumann"
DIRICHLET = "dirichlet"
MATCHED = "matched"
ARTIFICIAL_BCS = (NEUMANN, DIRICHLET, MATCHED)


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class GeodesicWall:
    """A vertical line ``x = c`` or a semicircle ``|z - c| = r`` with the side kept.

    For a vertical wall ``side=+1`` keeps ``x > c``; for a semicircle it keeps
    the outside ``|z - c| > r`` and ``side=-1`` the inside.
    """

    shape: str
    c: float
    r: float = 0.0
    side: int = 1
    bc: str = NEUMANN

    def __post_init__(self):
        if self.shape not in ("vertical", "semicircle"):
            raise DomainError(f"unknown wall shape {self.shape!r}")
        if self.shape == "semicircle" and not self.r > 0:
            raise DomainError("semicircle radius must be positive")
        if self.side not in (1, -1):
            raise DomainError("side must be +1 or -1")
        if self.bc not in (NEUMANN, DIRICHLET):
            raise DomainError(f"wall bc must be neumann or dirichlet, got {self.bc!r}")

    @classmethod
    def vertical(cls, c, side=1, bc=NEUMANN):
        return cls("vertical", float(c), 0.0, side, bc)

    @classmethod
    def semicircle(cls, c, r, side=1, bc=NEUMANN):
        return cls("semicircle", float(c), float(r), side, bc)

    def x_at(self, y):
        """Points of the wall at height ``y`` (empty, one or two abscissae)."""
        if self.shape == "vertical":
            return (self.c,)
        if y > self.r:
            return ()
        w = math.sqrt(max(self.r * self.r - y * y, 0.0))
        return (self.c - w, self.c + w)

    def to_dict(self):
        return {"shape": self.shape, "c": self.c, "r": self.r, "side": self.side, "bc": self.bc}


def _pair_heights(a: GeodesicWall, b: GeodesicWall):
    if a.shape == "vertical" and b.shape == "vertical":
        return []
    if a.shape == "vertical":
        a, b = b, a
    if b.shape == "vertical":
        y2 = a.r ** 2 - (b.c - a.c) ** 2
        return [math.sqrt(y2)] if y2 > 0 else []
    if a.c == b.c:
        return []
    x = (a.r ** 2 - b.r ** 2 + b.c ** 2 - a.c ** 2) / (2 * (b.c - a.c))
    y2 = a.r ** 2 - (x - a.c) ** 2
    return [math.sqrt(y2)] if y2 > 0 else []


@dataclass
class Section:
    lo: float
    hi: float
    lo_wall: int
    hi_wall: int

    @property
    def width(self):
        return self.hi - self.lo


@dataclass
class HyperbolicDomain:
    """Walls plus a truncation window ``eps <= y <= Y``.

    ``artificial_bc`` is the condition on the truncation edges: ``neumann``,
    ``dirichlet`` or ``matched`` (an asymptotic Robin condition, see
    :mod:`apollogap.spectral.fem`).  ``structured`` asks for a uniform
    Euclidean grid, which only works for rectangles.
    """

    walls: tuple
    eps: float
    Y: float
    name: str = "domain"
    artificial_bc: str = MATCHED
    structured: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.walls = tuple(self.walls)
        if not 0 < self.eps < self.Y:
            raise DomainError("truncation needs 0 < eps < Y")
        if self.artificial_bc not in ARTIFICIAL_BCS:
            raise DomainError(f"unknown artificial bc {self.artificial_bc!r}")
        lo, hi = self.y_range()
        if not hi > lo:
            raise DomainError(f"{self.name}: walls bound an empty region")

    # cross sections

    def section(self, y: float):
        """The interval of the region at height ``y``, or ``None`` when empty."""
        lo, hi, lw, hw = -math.inf, math.inf, -1, -1
        for i, w in enumerate(self.walls):
            if w.shape == "vertical":
                if w.side > 0 and w.c > lo:
                    lo, lw = w.c, i
                elif w.side < 0 and w.c < hi:
                    hi, hw = w.c, i
                continue
            if y >= w.r:
                if w.side < 0:
                    return None
                continue
            a, b = w.x_at(y)
            if w.side < 0:
                if a > lo:
                    lo, lw = a, i
                if b < hi:
                    hi, hw = b, i
                continue
            if b <= lo or a >= hi:
                continue
            if a <= lo and b >= hi:
                return None
            if a <= lo:
                lo, lw = b, i
            elif b >= hi:
                hi, hw = a, i
            else:
                raise DomainError(f"{self.name}: cross-section at y={y:g} is disconnected")
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"{self.name}: region is unbounded in x")
        if hi <= lo:
            return None
        return Section(lo, hi, lw, hw)

    def width(self, y: float) -> float:
        s = self.section(y)
        if s is None:
            return 0.0
        # near a cusp between a semicircle and a vertical wall, hi - lo cancels;
        # |d| - sqrt(r^2 - y^2) = (d^2 - r^2 + y^2) / (|d| + sqrt(r^2 - y^2)) does not
        a = self.walls[s.lo_wall] if s.lo_wall >= 0 else None
        b = self.walls[s.hi_wall] if s.hi_wall >= 0 else None
        if a is not None and b is not None and {a.shape, b.shape} == {"vertical", "semicircle"}:
            circ, vert = (a, b) if a.shape == "semicircle" else (b, a)
            d = abs(vert.c - circ.c)
            w = math.sqrt(max((circ.r - y) * (circ.r + y), 0.0))
            if abs(s.width - (d - w)) <= abs(s.width - (d + w)):
                return max((d - circ.r) * (d + circ.r) + y * y, 0.0) / (d + w)
        return s.width

    def breakpoints(self):
        """Heights in ``(eps, Y)`` where the active walls may change."""
        ys = set()
        for i, a in enumerate(self.walls):
            if a.shape == "semicircle":
                ys.add(a.r)
            for b in self.walls[i + 1:]:
                ys.update(_pair_heights(a, b))
        return sorted(y for y in ys if self.eps < y < self.Y)

    def y_range(self):
        """Smallest and largest heights in the truncation window with a nonempty section."""
        knots = [self.eps] + self.breakpoints() + [self.Y]
        probe = []
        for a, b in zip(knots[:-1], knots[1:]):
            probe += [a, 0.5 * (a + b)]
        probe.append(self.Y)
        alive = [y for y in probe if self.width(y) > 0]
        if not alive:
            return (0.0, 0.0)
        lo = min(alive)
        hi = max(alive)
        # refine to the actual endpoints between knots
        if lo > self.eps:
            lo = self._edge(lo, descending=True, knots=knots)
        if hi < self.Y:
            hi = self._edge(hi, descending=False, knots=knots)
        return (lo, hi)

    def _edge(self, y, descending, knots):
        k = max(k for k in knots if k < y) if descending else min(k for k in knots if k > y)
        if self.width(k) > 0:
            return k
        a, b = (k, y) if descending else (y, k)
        for _ in range(80):
            m = 0.5 * (a + b)
            if (self.width(m) > 0) == descending:
                b = m
            else:
                a = m
        return b if descending else a

    @property
    def has_bottom(self) -> bool:
        return self.width(self.eps) > 0

    @property
    def has_top(self) -> bool:
        return self.width(self.Y) > 0

    def bottom_is_funnel(self) -> bool:
        """A funnel edge keeps its width as ``eps`` shrinks; a cusp edge does not."""
        if not self.has_bottom:
            return False
        return self.width(0.5 * self.eps) > 0.5 * self.width(self.eps)

    def area(self) -> float:
        """Hyperbolic area ``int width(y) / y^2 dy`` of the truncated region."""
        knots = [self.eps] + self.breakpoints() + [self.Y]
        total = 0.0
        # substitute y = e^t so long cusp ranges stay well conditioned
        f = lambda t: self.width(math.exp(t)) * math.exp(-t)
        for a, b in zip(knots[:-1], knots[1:]):
            val, _ = integrate.quad(f, math.log(a), math.log(b), epsabs=1e-13, epsrel=1e-12, limit=200)
            total += val
        return total

    def with_truncation(self, eps: float, Y: float) -> "HyperbolicDomain":
        return replace(self, eps=float(eps), Y=float(Y))

    def with_artificial_bc(self, bc: str) -> "HyperbolicDomain":
        return replace(self, artificial_bc=bc)

    def with_wall_bc(self, index: int, bc: str) -> "HyperbolicDomain":
        walls = list(self.walls)
        walls[index] = replace(walls[index], bc=bc)
        return replace(self, walls=tuple(walls))

    def to_dict(self):
        return {
            "name": self.name,
            "walls": [w.to_dict() for w in self.walls],
            "eps": self.eps,
            "Y": self.Y,
            "artificial_bc": self.artificial_bc,
            "structured": self.structured,
        }


def build_domain(spec) -> HyperbolicDomain:
    """Domain from a mapping with ``walls`` (list of wall dicts), ``eps`` and ``Y``."""
    walls = []
    for w in spec["walls"]:
        w = dict(w)
        shape = w.pop("shape")
        walls.append(GeodesicWall(shape, float(w.pop("c")), float(w.pop("r", 0.0)), int(w.pop("side", 1)), w.pop("bc", NEUMANN)))
    return HyperbolicDomain(
        walls,
        float(spec.get("eps", 0.05)),
        float(spec.get("Y", 8.0)),
        name=spec.get("name", "domain"),
        artificial_bc=spec.get("artificial_bc", MATCHED),
        structured=bool(spec.get("structured", False)),
    )


def _check_mu(mu):
    if not mu > 2:
        raise DomainError(f"mu must exceed 2, got {mu}")


def hecke_D(mu: float, eps: float = 0.05, Y: float = 8.0, bc: str = NEUMANN) -> HyperbolicDomain:
    """Half of the Hecke fundamental domain: ``0 < x < mu/2``, ``|z| > 1``."""
    _check_mu(mu)
    walls = (
        GeodesicWall.vertical(0.0, 1, bc),
        GeodesicWall.vertical(mu / 2, -1, bc),
        GeodesicWall.semicircle(0.0, 1.0, 1, bc),
    )
    return HyperbolicDomain(walls, eps, Y, name=f"hecke_D({mu:g})", meta={"mu": mu})


def hecke_D1(eps: float = 0.05, Y: float = 8.0, bc: str = NEUMANN) -> HyperbolicDomain:
    """``0 < x < 1``, ``|z| > 1``: a triangle with a right angle at ``i`` and cusps at 1 and infinity."""
    walls = (
        GeodesicWall.vertical(0.0, 1, bc),
        GeodesicWall.vertical(1.0, -1, bc),
        GeodesicWall.semicircle(0.0, 1.0, 1, bc),
    )
    return HyperbolicDomain(walls, eps, Y, name="hecke_D1")


def hecke_D2(mu: float, eps: float = 0.05, Y: float = 8.0, bc: str = NEUMANN) -> HyperbolicDomain:
    """The strip ``1 < x < mu/2``."""
    _check_mu(mu)
    walls = (GeodesicWall.vertical(1.0, 1, bc), GeodesicWall.vertical(mu / 2, -1, bc))
    return HyperbolicDomain(walls, eps, Y, name=f"hecke_D2({mu:g})", meta={"mu": mu})


def strip_domain(a: float = 1.0, L: float = 1.0, bc: str = NEUMANN) -> HyperbolicDomain:
    """Rectangle ``0 < x < a``, ``1 < y < e^L`` with Dirichlet top and bottom.

    Separable: ``y^(1/2) sin(j pi log(y) / L)`` has eigenvalue ``1/4 + (j pi / L)^2``.
    """
    walls = (GeodesicWall.vertical(0.0, 1, bc), GeodesicWall.vertical(a, -1, bc))
    return HyperbolicDomain(
        walls, 1.0, math.exp(L), name=f"strip({a:g},{L:g})", artificial_bc=DIRICHLET, structured=True,
        meta={"a": a, "L": L},
    )


def strip_exact(L: float, j: int = 1) -> float:
    return 0.25 + (j * math.pi / L) ** 2


def named_domain(name: str, mu: float | None = None, **kw) -> HyperbolicDomain:
    if name == "hecke_D":
        return hecke_D(mu, **kw)
    if name == "hecke_D1":
        return hecke_D1(**kw)
    if name == "hecke_D2":
        return hecke_D2(mu, **kw)
    if name == "strip":
        return strip_domain(**kw)
    raise DomainError(f"unknown domain {name!r}")


def sample_walls(domain: HyperbolicDomain, n: int = 200) -> np.ndarray:
    """Heights and section endpoints on a geometric grid, for plotting and checks."""
    lo, hi = domain.y_range()
    ys = np.geomspace(lo, hi, n)
    out = []
    for y in ys:
        s = domain.section(y)
        if s is not None:
            out.append((y, s.lo, s.hi))
    return np.array(out)
