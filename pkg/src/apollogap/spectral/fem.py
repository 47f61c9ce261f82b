"""Piecewise-linear finite elements for ``-y^2 (u_xx + u_yy) = lambda u``.

The weak form uses the Euclidean Dirichlet energy (conformally invariant in
two dimensions) against the mass ``int u v / y^2``.

Matched truncation
------------------
Eigenfunctions below ``1/4`` decay like ``y^s`` into a funnel and like
``y^(1-s)`` up a cusp, with ``s(1-s) = lambda`` and ``s > 1/2``.  Cutting
there with a Neumann condition perturbs the eigenvalue by a power of the cut
height, which is slow.  The ``matched`` condition instead imposes the
asymptotic log-derivative on the cut: ``du/dn = -(s/eps) u`` on a funnel
floor and ``du/dn = ((1-s)/Y) u`` on a cusp ceiling.  Since ``s`` depends on
the eigenvalue, each eigenvalue below ``1/4`` is solved for self-consistently;
the ``i``-th eigenvalue grows with ``s`` while ``sigma(lambda)`` falls, so
the fixed point is unique.  For ``lambda >= 1/4`` we take ``s = 1/2``.
Floors closing into a cusp (width shrinking with ``eps``) stay Neumann.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import brentq

from .domain import DIRICHLET, MATCHED
from .mesh import BOTTOM, TOP, Mesh

THRESHOLD = 0.25


class SpectralError(RuntimeError):
    """Eigensolver failure; ``diagnostics`` carries what is known."""

    def __init__(self, msg, **diagnostics):
        super().__init__(f"{msg} {diagnostics}" if diagnostics else msg)
        self.diagnostics = diagnostics


def s_of_lambda(lam: float) -> float:
    """Decay exponent ``s >= 1/2`` with ``s(1-s) = lam``; ``1/2`` at and above threshold."""
    if lam >= THRESHOLD:
        return 0.5
    return 0.5 + math.sqrt(THRESHOLD - lam)


@dataclass
class AssembledSystem:
    A0: sp.csr_matrix  # Euclidean stiffness, full
    B: sp.csr_matrix  # weighted mass, full
    Mbot: sp.csr_matrix  # floor edge mass (Euclidean ds)
    Mtop: sp.csr_matrix  # ceiling edge mass
    free: np.ndarray  # unconstrained vertex indices
    mesh: Mesh
    mode: str
    robin_bottom: bool
    robin_top: bool

    @property
    def eps(self):
        return self.mesh.domain.eps

    @property
    def Y(self):
        return self.mesh.domain.Y

    @property
    def size(self) -> int:
        return len(self.free)

    @property
    def matched(self) -> bool:
        return self.mode == MATCHED and (self.robin_bottom or self.robin_top)

    def stiffness(self, s: float | None = None):
        """Reduced stiffness, including the matched Robin terms at exponent ``s``."""
        A = self.A0
        if self.mode == MATCHED:
            s = 0.5 if s is None else s
            if self.robin_bottom:
                A = A + (s / self.eps) * self.Mbot
            if self.robin_top:
                A = A - ((1.0 - s) / self.Y) * self.Mtop
        return _restrict(A, self.free)

    @property
    def A(self):
        return self.stiffness()

    @property
    def Bred(self):
        return _restrict(self.B, self.free)

    def expand(self, v: np.ndarray) -> np.ndarray:
        """Vertex values (zeros on Dirichlet vertices) from a reduced vector."""
        out = np.zeros((self.mesh.n_vertices,) + v.shape[1:])
        out[self.free] = v
        return out


def _restrict(M, idx):
    return M[idx][:, idx].tocsc()


def _edge_mass(verts, edges, n):
    if len(edges) == 0:
        return sp.csr_matrix((n, n))
    ln = np.linalg.norm(verts[edges[:, 0]] - verts[edges[:, 1]], axis=1)
    i = np.concatenate([edges[:, 0], edges[:, 1], edges[:, 0], edges[:, 1]])
    j = np.concatenate([edges[:, 0], edges[:, 1], edges[:, 1], edges[:, 0]])
    w = np.concatenate([ln / 3, ln / 3, ln / 6, ln / 6])
    return sp.coo_matrix((w, (i, j)), shape=(n, n)).tocsr()


def assemble(mesh: Mesh) -> AssembledSystem:
    """P1 stiffness and ``1/y^2``-weighted mass (edge-midpoint rule)."""
    v, t = mesh.vertices, mesh.triangles
    n = len(v)
    p = v[t]
    x, y = p[:, :, 0], p[:, :, 1]
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area2 = x[:, 0] * b[:, 0] + x[:, 1] * b[:, 1] + x[:, 2] * b[:, 2]
    if np.any(area2 <= 0):
        raise ValueError("mesh has degenerate or inverted triangles")
    area = 0.5 * area2
    Ke = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * area[:, None, None])
    # midpoints of edges (0,1), (1,2), (2,0)
    ym = 0.5 * (y + y[:, [1, 2, 0]])
    w = 1.0 / ym ** 2
    phi = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    Me = np.einsum("eq,qi,qj->eij", w, phi, phi) * (area / 3.0)[:, None, None]
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    A0 = sp.coo_matrix((Ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    B = sp.coo_matrix((Me.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    A0 = 0.5 * (A0 + A0.T)
    B = 0.5 * (B + B.T)

    dom = mesh.domain
    mode = dom.artificial_bc
    bot = mesh.edges[mesh.edge_tags == BOTTOM]
    top = mesh.edges[mesh.edge_tags == TOP]
    Mbot = _edge_mass(v, bot, n)
    Mtop = _edge_mass(v, top, n)
    dirichlet_walls = [i for i, w in enumerate(dom.walls) if w.bc == DIRICHLET]
    fixed = set(mesh.tagged_vertices(dirichlet_walls).tolist())
    if mode == DIRICHLET:
        fixed |= set(mesh.tagged_vertices([BOTTOM, TOP]).tolist())
    free = np.setdiff1d(np.arange(n), np.fromiter(fixed, dtype=np.int64, count=len(fixed)))
    robin_bottom = mode == MATCHED and len(bot) > 0 and dom.bottom_is_funnel()
    robin_top = mode == MATCHED and len(top) > 0
    return AssembledSystem(A0, B, Mbot, Mtop, free, mesh, mode, robin_bottom, robin_top)


def _normalise(vecs, B):
    norms = np.sqrt(np.einsum("ij,ij->j", vecs, B @ vecs))
    vecs = vecs / norms
    # deterministic sign: largest entry positive
    pick = np.argmax(np.abs(vecs), axis=0)
    sign = np.sign(vecs[pick, np.arange(vecs.shape[1])])
    sign[sign == 0] = 1.0
    return vecs * sign


def relative_residuals(A, B, vals, vecs) -> np.ndarray:
    R = A @ vecs - (B @ vecs) * vals
    return np.linalg.norm(R, axis=0) / np.linalg.norm(B @ vecs, axis=0)


def _pencil_lowest(A, B, k, sigma=-0.5, tol=1e-8):
    n = A.shape[0]
    if k < 1 or k > n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if n <= 600 or k >= n - 1:
        vals, vecs = scipy.linalg.eigh(A.toarray(), B.toarray(), subset_by_index=(0, k - 1))
    else:
        lu = spla.splu((A - sigma * B).tocsc())
        op = spla.LinearOperator((n, n), matvec=lu.solve, dtype=float)
        v0 = np.random.default_rng(0).standard_normal(n)
        try:
            vals, vecs = spla.eigsh(A, k=k, M=B, sigma=sigma, OPinv=op, v0=v0, tol=1e-13, maxiter=20 * n)
        except spla.ArpackNoConvergence as exc:
            raise SpectralError("eigensolver did not converge", n=n, k=k, converged=len(exc.eigenvalues)) from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], _normalise(vecs[:, order], B)
    res = relative_residuals(A, B, vals, vecs)
    if np.any(res > tol):
        raise SpectralError("residual check failed", n=n, k=k, max_residual=float(res.max()))
    return vals, vecs, res


@dataclass
class Eigenpairs:
    values: np.ndarray
    vectors: np.ndarray  # reduced
    residuals: np.ndarray
    exponents: np.ndarray  # matched-condition s for each pair (nan when unused)


def solve_lowest(system: AssembledSystem, k: int, s: float | None = None) -> Eigenpairs:
    """The ``k`` smallest eigenpairs of the pencil, Robin exponent held at ``s``.

    For the matched condition with ``s=None`` every eigenvalue below ``1/4``
    is solved with its own self-consistent exponent.
    """
    k = min(k, system.size)
    B = system.Bred
    if not system.matched or s is not None:
        vals, vecs, res = _pencil_lowest(system.stiffness(s), B, k)
        ex = np.full(k, np.nan if not system.matched else s)
        return Eigenpairs(vals, vecs, res, ex)
    vals, vecs, res = _pencil_lowest(system.stiffness(0.5), B, k)
    vals, vecs, res = vals.copy(), vecs.copy(), res.copy()
    ex = np.full(k, 0.5)
    for i in np.flatnonzero(vals < THRESHOLD):
        cache = {}

        def lam(s, i=i):
            if s not in cache:
                cache[s] = _pencil_lowest(system.stiffness(s), B, i + 1)
            return cache[s][0][i]

        def g(s):
            return s_of_lambda(lam(s)) - s

        hi = s_of_lambda(vals[i])
        if g(hi) >= 0:
            s_star = hi
        else:
            s_star = brentq(g, 0.5, hi, xtol=1e-10)
        lam(s_star)
        v, V, r = cache[s_star]
        vals[i], vecs[:, i], res[i], ex[i] = v[i], V[:, i], r[i], s_star
    order = np.argsort(vals, kind="stable")
    return Eigenpairs(vals[order], vecs[:, order], res[order], ex[order])


def boundary_mass_fraction(system: AssembledSystem, vectors: np.ndarray, widths: float = 3.0) -> np.ndarray:
    """Share of each eigenfunction's mass within ``widths`` local mesh widths of a truncation edge."""
    mesh = system.mesh
    dom = mesh.domain
    y = mesh.vertices[:, 1]
    lw = mesh.local_width()
    near = np.zeros(mesh.n_vertices, dtype=bool)
    if np.any(mesh.edge_tags == BOTTOM):
        near |= (y - dom.eps) <= widths * lw
    if np.any(mesh.edge_tags == TOP):
        near |= (dom.Y - y) <= widths * lw
    U = system.expand(vectors)
    BU = system.B @ U
    dens = U * BU
    total = dens.sum(axis=0)
    return dens[near].sum(axis=0) / total
