"""Numpy implementations of the hot loops.

Same signatures and outputs (up to ordering) as the compiled
``_ckernels`` module; :mod:`apollogap.kernels` picks one at import time.
"""

import numpy as np


def descartes_curvatures(root, T):
    """Curvatures in ``(0, T]`` of the packing generated by an integral root.

    Level-synchronous, non-backtracking traversal of the Descartes tree.  A
    child is dropped together with its subtree once its new curvature
    exceeds ``T``.  Returns an unsorted int64 array.
    """
    root = np.asarray(root, dtype=np.int64)
    T = int(T)
    out = [root[(root > 0) & (root <= T)]]
    quads = root[None, :].copy()
    last = np.array([-1], dtype=np.int8)
    while len(quads):
        s = quads.sum(axis=1)
        next_quads, next_last = [], []
        for i in range(4):
            new = 2 * s - 3 * quads[:, i]
            keep = (last != i) & (new <= T)
            if not keep.any():
                continue
            q = quads[keep].copy()
            q[:, i] = new[keep]
            out.append(new[keep])
            next_quads.append(q)
            next_last.append(np.full(len(q), i, dtype=np.int8))
        if not next_quads:
            break
        quads = np.concatenate(next_quads)
        last = np.concatenate(next_last)
    return np.concatenate(out).astype(np.int64)


def descartes_circles(root, T):
    """Inversive coordinates of circles with curvature in ``(0, T]``.

    ``root`` is a ``(4, 4)`` integer array of mutually tangent circles
    ``(cocurv, curv, cx, cy)``.  Uses the linear swap ``c_i -> 2 sum_{j!=i}
    c_j - c_i`` on whole coordinate vectors.
    """
    root = np.asarray(root, dtype=np.int64)
    T = int(T)
    curv = root[:, 1]
    out = [root[(curv > 0) & (curv <= T)]]
    quads = root[None, :, :].copy()
    last = np.array([-1], dtype=np.int8)
    while len(quads):
        s = quads.sum(axis=1)
        next_quads, next_last = [], []
        for i in range(4):
            new = 2 * s - 3 * quads[:, i, :]
            keep = (last != i) & (new[:, 1] <= T)
            if not keep.any():
                continue
            q = quads[keep].copy()
            q[:, i, :] = new[keep]
            out.append(new[keep])
            next_quads.append(q)
            next_last.append(np.full(len(q), i, dtype=np.int8))
        if not next_quads:
            break
        quads = np.concatenate(next_quads)
        last = np.concatenate(next_last)
    return np.concatenate(out).astype(np.int64).reshape(-1, 4)


def hecke_orbit_points(mu, depth, K, min_size):
    """Orbit of 0 under words in the maps ``x -> -1/(x + k mu)``, ``0 < |k| <= K``.

    A word is extended only while its image of ``[-1, 1]`` is at least
    ``min_size`` long and it is shorter than ``depth``.  For each node the
    ``k`` loop stops at the first ``k >= 2`` where both ``+k`` and ``-k``
    children fall below ``min_size`` (cylinder length grows with ``|k|``).
    """
    mu = float(mu)
    pts = [np.zeros(1)]
    a = np.ones(1)
    b = np.zeros(1)
    c = np.zeros(1)
    d = np.ones(1)
    for _ in range(depth):
        active = np.ones(len(a), dtype=bool)
        na, nb, nc, nd = [], [], [], []
        for k in range(1, K + 1):
            if not active.any():
                break
            idx = np.flatnonzero(active)
            ai, bi, ci, di = a[idx], b[idx], c[idx], d[idx]
            small = np.ones(len(idx), dtype=bool)
            for kk in (k, -k):
                t = kk * mu
                cb = -ai + bi * t
                cd = -ci + di * t
                diam = 2.0 / np.abs(cd * cd - di * di)
                pts.append(cb / cd)
                grow = diam >= min_size
                small &= ~grow
                na.append(bi[grow])
                nb.append(cb[grow])
                nc.append(di[grow])
                nd.append(cd[grow])
            if k >= 2:
                active[idx[small]] = False
        if not na:
            break
        a = np.concatenate(na)
        b = np.concatenate(nb)
        c = np.concatenate(nc)
        d = np.concatenate(nd)
        if not len(a):
            break
    return np.concatenate(pts)
