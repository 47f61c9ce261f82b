"""Triangulations of truncated domains, graded so elements have hyperbolic size about ``h``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import triangle

from .domain import HyperbolicDomain, DomainError

BOTTOM = -1
TOP = -2
_MARK_BOTTOM, _MARK_TOP, _MARK_WALL0 = 2, 3, 10


class MeshError(ValueError):
    pass


@dataclass
class Mesh:
    vertices: np.ndarray  # (N, 2)
    triangles: np.ndarray  # (M, 3), counterclockwise
    edges: np.ndarray  # (E, 2) boundary edges
    edge_tags: np.ndarray  # wall index, BOTTOM or TOP
    h: float
    domain: HyperbolicDomain

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def angles(self) -> np.ndarray:
        """Interior angles in degrees, shape ``(M, 3)``."""
        p = self.vertices[self.triangles]
        out = np.empty((len(p), 3))
        for k in range(3):
            u = p[:, (k + 1) % 3] - p[:, k]
            v = p[:, (k + 2) % 3] - p[:, k]
            cos = np.einsum("ij,ij->i", u, v) / (np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            out[:, k] = np.degrees(np.arccos(np.clip(cos, -1.0, 1.0)))
        return out

    def edge_lengths(self) -> np.ndarray:
        p = self.vertices
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.linalg.norm(p[e[:, 0]] - p[e[:, 1]], axis=1)

    def max_edge(self) -> float:
        return float(self.edge_lengths().max())

    def tagged_vertices(self, tags) -> np.ndarray:
        mask = np.isin(self.edge_tags, list(tags))
        return np.unique(self.edges[mask])

    def local_width(self) -> np.ndarray:
        """Mean Euclidean length of the edges at each vertex."""
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        ln = np.linalg.norm(self.vertices[e[:, 0]] - self.vertices[e[:, 1]], axis=1)
        tot = np.bincount(e.ravel(), weights=np.repeat(ln, 2), minlength=self.n_vertices)
        cnt = np.bincount(e.ravel(), minlength=self.n_vertices)
        return tot / np.maximum(cnt, 1)


def _geometric(a, b, h):
    n = max(1, math.ceil(abs(math.log(b / a)) / h))
    return np.geomspace(a, b, n + 1)


def _wall_piece(wall, x_side, ya, yb, h):
    """Points ``(x, y)`` along one wall from height ``ya`` to ``yb`` (inclusive)."""
    if wall.shape == "vertical":
        ys = _geometric(ya, yb, h)
        return np.column_stack([np.full_like(ys, wall.c), ys])
    r, c = wall.r, wall.c

    def theta(y):
        t = math.asin(min(y / r, 1.0))
        return t if x_side > 0 else math.pi - t

    ta, tb = theta(ya), theta(yb)
    ua, ub = math.log(math.tan(ta / 2)), math.log(math.tan(tb / 2))
    n = max(1, math.ceil(abs(ub - ua) / h))
    # sagitta of each chord at most h^2
    if h * h < r:
        dmax = 2 * math.acos(1 - h * h / r)
        n = max(n, math.ceil(abs(tb - ta) / dmax))
    th = 2 * np.arctan(np.exp(np.linspace(ua, ub, n + 1)))
    pts = np.column_stack([c + r * np.cos(th), r * np.sin(th)])
    pts[0] = (c + x_side * math.sqrt(max(r * r - ya * ya, 0.0)), ya)
    pts[-1] = (c + x_side * math.sqrt(max(r * r - yb * yb, 0.0)), yb)
    return pts


def _side_pieces(domain, y0, y1, which):
    """Consecutive ``(wall index, ya, yb)`` along the left or right side."""
    knots = [y0] + [y for y in domain.breakpoints() if y0 < y < y1] + [y1]
    pieces = []
    for a, b in zip(knots[:-1], knots[1:]):
        s = domain.section(0.5 * (a + b))
        w = s.lo_wall if which == "lo" else s.hi_wall
        if pieces and pieces[-1][0] == w:
            pieces[-1] = (w, pieces[-1][1], b)
        else:
            pieces.append((w, a, b))
    return pieces


def boundary_polygon(domain: HyperbolicDomain, h: float):
    """Counterclockwise boundary points and the tag of each segment leaving a point."""
    y0, y1 = domain.y_range()
    pts, tags = [], []

    def add(arr, tag):
        for p in arr[:-1]:
            pts.append(tuple(p))
            tags.append(tag)

    s0, s1 = domain.section(y0), domain.section(y1)
    if s0 is not None and s0.width > 0:
        n = max(1, math.ceil(s0.width / (h * y0)))
        xs = np.linspace(s0.lo, s0.hi, n + 1)
        add(np.column_stack([xs, np.full_like(xs, y0)]), BOTTOM)
    for w, a, b in _side_pieces(domain, y0, y1, "hi"):
        wall = domain.walls[w]
        add(_wall_piece(wall, +1 if wall.shape == "semicircle" and domain.section(0.5 * (a + b)).hi > wall.c else -1, a, b, h), w)
    if s1 is not None and s1.width > 0:
        n = max(1, math.ceil(s1.width / (h * y1)))
        xs = np.linspace(s1.hi, s1.lo, n + 1)
        add(np.column_stack([xs, np.full_like(xs, y1)]), TOP)
    for w, a, b in reversed(_side_pieces(domain, y0, y1, "lo")):
        wall = domain.walls[w]
        side = +1 if wall.shape == "semicircle" and domain.section(0.5 * (a + b)).lo > wall.c else -1
        add(_wall_piece(wall, side, b, a, h), w)
    return np.array(pts, dtype=float), np.array(tags, dtype=int)


def _marker(tag):
    if tag == BOTTOM:
        return _MARK_BOTTOM
    if tag == TOP:
        return _MARK_TOP
    return _MARK_WALL0 + tag


def _unmarker(m):
    m = np.asarray(m).ravel()
    out = m - _MARK_WALL0
    out[m == _MARK_BOTTOM] = BOTTOM
    out[m == _MARK_TOP] = TOP
    return out


def _structured(domain: HyperbolicDomain, h: float) -> Mesh:
    s = domain.section(0.5 * (domain.eps + domain.Y))
    for y in (domain.eps, domain.Y):
        t = domain.section(y)
        if t is None or abs(t.lo - s.lo) > 1e-12 or abs(t.hi - s.hi) > 1e-12:
            raise MeshError("structured meshing needs a rectangle")
    step = h / math.sqrt(2.0)
    nx = max(1, math.ceil((s.hi - s.lo) / step - 1e-9))
    ny = max(1, math.ceil((domain.Y - domain.eps) / step - 1e-9))
    xs = np.linspace(s.lo, s.hi, nx + 1)
    ys = np.linspace(domain.eps, domain.Y, ny + 1)
    X, Yg = np.meshgrid(xs, ys)
    verts = np.column_stack([X.ravel(), Yg.ravel()])
    idx = np.arange((nx + 1) * (ny + 1)).reshape(ny + 1, nx + 1)
    a, b = idx[:-1, :-1].ravel(), idx[:-1, 1:].ravel()
    c, d = idx[1:, :-1].ravel(), idx[1:, 1:].ravel()
    tris = np.concatenate([np.column_stack([a, b, d]), np.column_stack([a, d, c])])
    edges, tags = [], []
    for row, tag in ((idx[0], BOTTOM), (idx[-1], TOP)):
        edges.append(np.column_stack([row[:-1], row[1:]]))
        tags.append(np.full(nx, tag))
    for col, w in ((idx[:, 0], s.lo_wall), (idx[:, -1], s.hi_wall)):
        edges.append(np.column_stack([col[:-1], col[1:]]))
        tags.append(np.full(ny, w))
    return Mesh(verts, tris, np.concatenate(edges), np.concatenate(tags), h, domain)


def build_mesh(domain: HyperbolicDomain, h: float, max_rounds: int = 40) -> Mesh:
    """Mesh whose triangles have hyperbolic diameter about ``h``.

    The target Euclidean area of a triangle with centroid height ``y`` is
    that of an equilateral triangle of side ``h * y``.  Minimum angle 20
    degrees except where the domain itself has a sharper corner.
    """
    if not h > 0:
        raise MeshError("h must be positive")
    if domain.structured:
        return _structured(domain, h)
    if h > 1.0:
        raise MeshError(f"h={h} is too coarse to resolve the domain")
    try:
        pts, tags = boundary_polygon(domain, h)
    except DomainError as exc:
        raise MeshError(str(exc)) from exc
    n = len(pts)
    if n < 3:
        raise MeshError("boundary polygon is degenerate")
    seg = np.column_stack([np.arange(n), (np.arange(n) + 1) % n])
    marks = np.array([_marker(t) for t in tags])[:, None]
    tri = triangle.triangulate({"vertices": pts, "segments": seg, "segment_markers": marks}, "pq20Q")
    coef = math.sqrt(3.0) / 4.0 * h * h
    for _ in range(max_rounds):
        v, t = tri["vertices"], tri["triangles"]
        p = v[t]
        yc = p[:, :, 1].mean(axis=1)
        target = coef * yc * yc
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        area = 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
        if np.all(area <= 1.5 * target):
            break
        tri["triangle_max_area"] = target
        tri = triangle.triangulate(tri, "rpq20aQ")
    else:
        raise MeshError("area refinement did not settle")
    verts = tri["vertices"]
    tris = tri["triangles"].astype(np.int64)
    # counterclockwise orientation
    p = verts[tris]
    sa = (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1]) - (p[:, 1, 1] - p[:, 0, 1]) * (p[:, 2, 0] - p[:, 0, 0])
    flip = sa < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    return Mesh(verts, tris, tri["segments"].astype(np.int64), _unmarker(tri["segment_markers"]), h, domain)
