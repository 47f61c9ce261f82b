"""Apollonian packings as orbits of Descartes configurations.

Two independent enumerations are provided:

* :func:`enumerate_curvatures` walks the Descartes tree on curvatures only,
  through the compiled (or numpy) kernel;
* :func:`enumerate_circles_geometric` carries full inversive coordinates and
  produces each new circle by inverting the replaced one in the dual circle
  of the other three.

Counting convention: ``N(T)`` counts circles with curvature in ``(0, T]``;
the bounding circle and lines are excluded.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .geom import InversiveCircle, is_tangent, reflect_circles

DEFAULT_ROOT = (-1, 2, 2, 3)


class InvalidRootError(ValueError):
    pass


@dataclass(frozen=True)
class DescartesQuadruple:
    k: tuple

    def __post_init__(self):
        if len(self.k) != 4:
            raise InvalidRootError("a Descartes quadruple has four curvatures")
        object.__setattr__(self, "k", tuple(self.k))

    @property
    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in self.k)

    def defect(self):
        """``(sum k)^2 - 2 sum k^2``; zero for a valid quadruple."""
        k = self.k
        return sum(k) ** 2 - 2 * sum(v * v for v in k)

    def is_valid(self, tol: float = 1e-9) -> bool:
        if self.is_integral:
            return self.defect() == 0
        scale = max(1.0, max(abs(float(v)) for v in self.k)) ** 2
        return abs(self.defect()) <= tol * scale

    def __iter__(self):
        return iter(self.k)

    def __getitem__(self, i):
        return self.k[i]


def swap(q: DescartesQuadruple, i: int) -> DescartesQuadruple:
    """Replace curvature ``i`` (0-based) by the other root of the Descartes equation."""
    k = list(q.k)
    k[i] = 2 * (sum(k) - k[i]) - k[i]
    return DescartesQuadruple(tuple(k))


def validate_root(root) -> DescartesQuadruple:
    q = root if isinstance(root, DescartesQuadruple) else DescartesQuadruple(tuple(root))
    if not q.is_valid():
        raise InvalidRootError(f"{q.k} does not satisfy the Descartes relation")
    if sum(1 for v in q.k if v <= 0) != 1 or min(q.k) >= 0:
        raise InvalidRootError(f"{q.k} is not a bounded packing root (need exactly one negative curvature)")
    # reduced: no swap from the root may lower a curvature, otherwise pruning is unsound
    for i in range(4):
        if swap(q, i)[i] < q[i]:
            raise InvalidRootError(f"{q.k} is not reduced: swapping entry {i} lowers it")
    return q


def enumerate_curvatures(root=DEFAULT_ROOT, T: float = 100) -> np.ndarray:
    """Sorted multiset of curvatures in ``(0, T]`` in the packing of ``root``."""
    q = validate_root(root)
    if T <= 0:
        return np.zeros(0, dtype=np.int64 if q.is_integral else float)
    if q.is_integral:
        out = kernels.descartes_curvatures(np.array(q.k, dtype=np.int64), int(math.floor(T)))
    else:
        out = _float_curvatures(np.array(q.k, dtype=float), float(T))
    return np.sort(out)


def _float_curvatures(root: np.ndarray, T: float) -> np.ndarray:
    tol = 1e-9 * max(1.0, T)
    out = [root[(root > 0) & (root <= T + tol)]]
    quads, last = root[None, :], np.array([-1])
    while len(quads):
        s = quads.sum(axis=1)
        nq, nl = [], []
        for i in range(4):
            new = 2 * s - 3 * quads[:, i]
            keep = (last != i) & (new <= T + tol)
            q = quads[keep].copy()
            q[:, i] = new[keep]
            out.append(new[keep])
            nq.append(q)
            nl.append(np.full(len(q), i))
        quads, last = np.concatenate(nq), np.concatenate(nl)
    return np.concatenate(out)


@dataclass(frozen=True)
class CirclesQuadruple:
    circles: tuple

    def __post_init__(self):
        cs = tuple(self.circles)
        if len(cs) != 4:
            raise InvalidRootError("need four circles")
        for a in range(4):
            for b in range(a + 1, 4):
                if not is_tangent(cs[a], cs[b], tol=1e-8):
                    raise InvalidRootError(f"circles {a} and {b} are not tangent")
        object.__setattr__(self, "circles", cs)

    @property
    def curvatures(self) -> DescartesQuadruple:
        return DescartesQuadruple(tuple(c.curv for c in self.circles))

    def as_array(self) -> np.ndarray:
        if all(isinstance(v, int) for c in self.circles for v in c.as_tuple()):
            return np.array([c.as_tuple() for c in self.circles], dtype=np.int64)
        return np.array([c.as_array() for c in self.circles])


def root_circles(root=DEFAULT_ROOT) -> CirclesQuadruple:
    """Place a bounded Descartes configuration with the given curvatures.

    The bounding circle is centered at the origin, the second circle touches
    it at ``(R, 0)`` and the third lies above the real axis.  Coordinates are
    returned as integers whenever they come out integral, which holds for
    ``(-1, 2, 2, 3)``.
    """
    q = validate_root(root)
    order = sorted(range(4), key=lambda i: q[i])
    k1, k2, k3, k4 = (float(q[i]) for i in order)
    R = -1.0 / k1
    r2, r3 = 1.0 / k2, 1.0 / k3
    z1 = 0j
    z2 = complex(R - r2, 0.0)
    # third circle: |z3| = R - r3 and |z3 - z2| = r2 + r3
    d1, d2, d12 = R - r3, r2 + r3, abs(z2)
    x = (d1 * d1 - d2 * d2 + d12 * d12) / (2 * d12)
    h2 = d1 * d1 - x * x
    z3 = complex(x, math.sqrt(h2) if h2 > 1e-12 * d1 * d1 else 0.0)
    s = k1 * z1 + k2 * z2 + k3 * z3
    root_term = 2 * cmath.sqrt(k1 * k2 * z1 * z2 + k2 * k3 * z2 * z3 + k1 * k3 * z1 * z3)
    cands = []
    for sign in (1, -1):
        z4 = (s + sign * root_term) / k4
        c4 = InversiveCircle.from_center(z4.real, z4.imag, 1.0 / k4)
        cands.append(c4)
    c1 = InversiveCircle.from_center(0.0, 0.0, R, outward=True)
    c2 = InversiveCircle.from_center(z2.real, z2.imag, r2)
    c3 = InversiveCircle.from_center(z3.real, z3.imag, r3)
    circles = None
    for c4 in cands:
        trial = [c1, c2, c3, c4]
        if all(is_tangent(trial[a], trial[b], tol=1e-7) for a in range(4) for b in range(a + 1, 4)):
            circles = trial
            break
    if circles is None:
        raise InvalidRootError(f"could not place a configuration for {q.k}")
    circles = [_snap(c) for c in circles]
    placed = [None] * 4
    for slot, c in zip(order, circles):
        placed[slot] = c
    return CirclesQuadruple(tuple(placed))


def _snap(c: InversiveCircle, tol: float = 1e-9) -> InversiveCircle:
    vals = c.as_tuple()
    if all(abs(v - round(v)) <= tol for v in vals):
        return InversiveCircle(*(int(round(v)) for v in vals))
    return c


def _orbit_levels(root: np.ndarray, T: float, max_depth: int | None = None) -> Iterator[tuple]:
    """Non-backtracking levels of the Descartes tree in inversive coordinates.

    Yields ``(parents, i, new)`` per level and swap index, where ``parents``
    holds the quadruples that produced the new circles ``new`` by replacing
    slot ``i``.  Each new circle is the inversion of the replaced circle in
    the dual circle through the tangency points of the other three.
    """
    quads = root[None, :, :]
    last = np.array([-1])
    depth = 0
    while len(quads) and (max_depth is None or depth < max_depth):
        depth += 1
        nq, nl = [], []
        total = quads.sum(axis=1)
        for i in range(4):
            sel = last != i
            if not sel.any():
                continue
            q = quads[sel]
            dual = total[sel] - 2 * q[:, i, :]
            new = reflect_circles(dual, q[:, i, :])
            keep = new[:, 1] <= T
            if not keep.any():
                continue
            q = q[keep].copy()
            new = new[keep]
            yield q, i, new
            q[:, i, :] = new
            nq.append(q)
            nl.append(np.full(len(q), i))
        if not nq:
            break
        quads = np.concatenate(nq)
        last = np.concatenate(nl)


def circle_sort_key(arr: np.ndarray) -> np.ndarray:
    """Deterministic order: curvature, then center x, then center y."""
    arr = np.asarray(arr)
    curv = arr[:, 1].astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(curv != 0, arr[:, 2] / curv, 0.0)
        y = np.where(curv != 0, arr[:, 3] / curv, 0.0)
    return np.lexsort((y, x, curv))


def circle_array(root_circles: CirclesQuadruple, T: float, max_depth: int | None = None) -> np.ndarray:
    """``(N, 4)`` inversive coordinates of circles with curvature in ``(0, T]``."""
    root = root_circles.as_array()
    if T <= 0:
        return np.zeros((0, 4), dtype=root.dtype)
    parts = [root[(root[:, 1] > 0) & (root[:, 1] <= T)]]
    parts += [new[new[:, 1] > 0] for _, _, new in _orbit_levels(root, T, max_depth)]
    out = np.concatenate(parts)
    return out[circle_sort_key(out)]


def enumerate_circles_geometric(root_circles: CirclesQuadruple, T: float, max_depth: int | None = None) -> list:
    """Circles of curvature in ``(0, T]`` as :class:`InversiveCircle` values, sorted.

    ``max_depth`` limits the word length instead of (in addition to) ``T``.
    """
    arr = circle_array(root_circles, T, max_depth)
    if np.issubdtype(arr.dtype, np.integer):
        return [InversiveCircle(*(int(v) for v in row)) for row in arr]
    return [InversiveCircle(*(float(v) for v in row)) for row in arr]


def tangency_points(root_circles: CirclesQuadruple, T: float) -> np.ndarray:
    """Points where each enumerated circle touches the three circles it was born against.

    Together with the root tangencies these are dense in the residual set as
    ``T`` grows.  Returns a ``(M, 2)`` float array.
    """
    root = root_circles.as_array().astype(float)
    pts = []
    for a in range(4):
        for b in range(a + 1, 4):
            pts.append(_touch(root[a][None], root[b][None]))
    for parents, i, new in _orbit_levels(root_circles.as_array(), T):
        newf = new.astype(float)
        for j in range(4):
            if j != i:
                pts.append(_touch(newf, parents[:, j, :].astype(float)))
    out = np.concatenate(pts)
    return out[np.isfinite(out).all(axis=1)]


def _touch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    den = a[:, 1] + b[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.stack([(a[:, 2] + b[:, 2]) / den, (a[:, 3] + b[:, 3]) / den], axis=1)


@dataclass
class CountProfile:
    thresholds: list
    counts: list
    root: tuple = DEFAULT_ROOT

    def __post_init__(self):
        if len(self.thresholds) != len(self.counts):
            raise ValueError("thresholds and counts differ in length")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be nondecreasing")


def count_profile(root=DEFAULT_ROOT, Ts: Sequence[float] = (100,)) -> CountProfile:
    Ts = [float(t) for t in Ts]
    curv = enumerate_curvatures(root, max(Ts)) if Ts else np.zeros(0)
    counts = np.searchsorted(curv, np.asarray(Ts) + 1e-9 * np.maximum(1.0, Ts), side="right")
    q = validate_root(root)
    return CountProfile(Ts, [int(c) for c in counts], tuple(q.k))


def fit_growth_exponent(profile: CountProfile, Tmin: float = 0.0) -> tuple:
    """Least-squares slope of ``log N`` against ``log T`` for ``T >= Tmin``.

    Returns ``(slope, standard error)``.  Thresholds with ``N = 0`` carry no
    information and are skipped.
    """
    T = np.asarray(profile.thresholds, dtype=float)
    N = np.asarray(profile.counts, dtype=float)
    m = (T >= Tmin) & (N > 0)
    if m.sum() < 5:
        raise ValueError(f"need at least 5 thresholds above Tmin={Tmin} with N > 0, have {int(m.sum())}")
    x, y = np.log(T[m]), np.log(N[m])
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xc
    dof = len(x) - 2
    stderr = math.sqrt(float(resid @ resid) / dof / sxx) if dof > 0 else 0.0
    return slope, stderr


def geometric_thresholds(lo: float, hi: float, per_decade: int = 10) -> list:
    n = max(2, int(round(math.log10(hi / lo) * per_decade)) + 1)
    return [float(t) for t in np.geomspace(lo, hi, n)]


def picard_orbit(words: int, walls=None) -> list:
    """Distinct circles reached from W0 by words of length ``<= words`` in W1..W4.

    Returned in order of first appearance (breadth first).
    """
    from .geom import PICARD_WALLS, reflect_circle

    walls = PICARD_WALLS if walls is None else walls
    w0, mirrors = walls[0], walls[1:]
    seen = {w0.as_tuple(): w0}
    frontier = [w0]
    for _ in range(words):
        nxt = []
        for c in frontier:
            for m in mirrors:
                img = reflect_circle(m, c)
                key = img.as_tuple()
                if key not in seen:
                    seen[key] = img
                    nxt.append(img)
        frontier = nxt
    return list(seen.values())


__all__ = [
    "CirclesQuadruple",
    "CountProfile",
    "DEFAULT_ROOT",
    "DescartesQuadruple",
    "InvalidRootError",
    "circle_array",
    "count_profile",
    "enumerate_circles_geometric",
    "enumerate_curvatures",
    "fit_growth_exponent",
    "geometric_thresholds",
    "picard_orbit",
    "root_circles",
    "swap",
    "tangency_points",
    "validate_root",
]
