"""Limit-set samples, box-counting dimension and the Patterson-Sullivan relation."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels

DEFAULT_SCALES = tuple(2.0 ** -j for j in range(4, 15))


def ps_eigenvalue(delta: float, n: int) -> float:
    """Base eigenvalue ``delta * (n - delta)`` attached to a limit set of dimension ``delta``.

    It is a discrete eigenvalue of the quotient only when ``delta > n/2``;
    checking that is the caller's business.
    """
    if not 0 < delta <= n:
        raise ValueError(f"delta must lie in (0, {n}], got {delta}")
    return delta * (n - delta)


def invert_ps(lambda0: float, n: int) -> float:
    """The root ``delta >= n/2`` of ``delta * (n - delta) = lambda0``."""
    top = n * n / 4.0
    if lambda0 < 0 or lambda0 > top:
        raise ValueError(f"lambda0 must lie in [0, {top}] for n={n}, got {lambda0}")
    return n / 2.0 + math.sqrt(top - lambda0)


@dataclass
class LimitSetSample:
    points: np.ndarray
    depth: int
    generators: str
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        return 1 if np.ndim(self.points) == 1 else int(np.shape(self.points)[1])


@dataclass
class DimensionEstimate:
    delta: float
    stderr: float
    method: str
    scales: list
    counts: list = field(default_factory=list)


def hecke_branch_cutoff(mu: float, min_size: float) -> int:
    """Smallest ``K`` beyond which every first-level branch is below ``min_size``."""
    return int(math.ceil(math.sqrt(2.0 / min_size) / mu)) + 1


def sample_hecke_limit_set(
    mu: float,
    depth: int = 12,
    K: int | None = None,
    min_size: float | None = None,
) -> LimitSetSample:
    """Orbit of 0 under the inverse branches ``x -> -1/(x + k mu)``, ``0 < |k| <= K``.

    These branches are the words ``S T^k`` in the Hecke generators; their
    common attractor inside ``[-1, 1]`` is the limit set with the orbit of
    the cusp at infinity.  Words are grown while shorter than ``depth`` and
    while their image of ``[-1, 1]`` is at least ``min_size`` long, so the
    sample is resolved down to ``min_size`` and no further.  ``K=None``
    includes every branch that is still resolved.
    """
    if mu <= 2:
        raise ValueError(f"mu must exceed 2 (mu={mu} gives a lattice)")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if min_size is None:
        min_size = DEFAULT_SCALES[-1] / 64
    if K is None:
        K = hecke_branch_cutoff(mu, min_size)
    if K < 1:
        raise ValueError("K must be at least 1")
    pts = kernels.hecke_orbit_points(float(mu), int(depth), int(K), float(min_size))
    pts = np.unique(pts)
    return LimitSetSample(pts, depth, f"x -> -1/(x + k*{mu}), 0<|k|<={K}", {"mu": mu, "K": K, "min_size": min_size})


def cantor_sample(depth: int, ratio: float = 1 / 3, pieces: int = 2) -> LimitSetSample:
    """Left endpoints of the level-``depth`` intervals of a uniform self-similar set in ``[0, 1]``."""
    if pieces * ratio > 1:
        raise ValueError("pieces overlap")
    gap = (1 - pieces * ratio) / (pieces - 1) if pieces > 1 else 0.0
    offsets = np.arange(pieces) * (ratio + gap)
    pts = np.zeros(1)
    scale = 1.0
    for _ in range(depth):
        pts = (pts[:, None] + scale * offsets[None, :]).ravel()
        scale *= ratio
    return LimitSetSample(pts, depth, f"{pieces} maps of ratio {ratio}")


def occupied_boxes(points: np.ndarray, scale: float) -> int:
    """Number of cells of the grid ``scale * Z^d`` (anchored at 0) that contain a point."""
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        cells = np.sort(np.floor(p / scale))
        return int(1 + np.count_nonzero(np.diff(cells))) if len(cells) else 0
    cells = np.floor(p / scale).astype(np.int64)
    return int(len(np.unique(cells, axis=0)))


def box_counting_dimension(sample, scales=DEFAULT_SCALES) -> DimensionEstimate:
    """Slope of ``log N(r)`` against ``log(1/r)`` over the given box sizes."""
    scales = sorted((float(s) for s in scales), reverse=True)
    if len(scales) < 4 or scales[0] / scales[-1] < 100:
        raise ValueError("need at least 4 scales spanning two decades")
    pts = sample.points if isinstance(sample, LimitSetSample) else np.asarray(sample)
    counts = [occupied_boxes(pts, s) for s in scales]
    if counts[-1] <= 1:
        warnings.warn("degenerate sample: all points share one box", RuntimeWarning, stacklevel=2)
        return DimensionEstimate(0.0, 0.0, "box-count", scales, counts)
    x = np.log(1.0 / np.asarray(scales))
    y = np.log(np.asarray(counts, dtype=float))
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xc
    stderr = math.sqrt(float(resid @ resid) / (len(x) - 2) / sxx)
    return DimensionEstimate(slope, stderr, "box-count", scales, counts)


def apollonian_residual_sample(T: float = 1e4, root=None) -> LimitSetSample:
    """Tangency points of the packing circles with curvature up to ``T``."""
    from .packing import DEFAULT_ROOT, root_circles, tangency_points

    rc = root_circles(DEFAULT_ROOT if root is None else root)
    pts = tangency_points(rc, T)
    return LimitSetSample(pts, 0, "Apollonian tangency points", {"T": T})


def apollonian_scales(T: float, coarsest: float = 2.0 ** -3) -> list:
    """Dyadic scales from ``coarsest`` down to about ``8/T``, the resolved range at ``T``."""
    finest = 8.0 / T
    j0 = int(round(-math.log2(coarsest)))
    j1 = int(math.floor(-math.log2(finest)))
    return [2.0 ** -j for j in range(j0, j1 + 1)]
