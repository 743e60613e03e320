"""Weighted point sets, distances, and the hard/soft clustering objectives.

Centers are plain ``(k, d)`` float arrays throughout the package; a
:class:`Dataset` bundles an ``(n, d)`` point array with an ``(n,)`` array of
positive weights (a raw point has weight 1, compressed stream summaries carry
the mass of the points they stand for).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Dataset",
    "SoftParams",
    "approx_factor",
    "hard_cost",
    "membership_matrix",
    "memberships",
    "soft_centroids",
    "soft_cost",
    "soft_cost_closed",
    "squared_distance",
]


@dataclass(frozen=True)
class Dataset:
    """Ordered collection of weighted d-dimensional points.

    ``points`` has shape ``(n, d)`` with finite entries, ``weights`` has shape
    ``(n,)`` with strictly positive entries.  A Dataset may be empty; the
    clustering operations reject empty inputs themselves.
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ValueError(f"points must have shape (n, d), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (pts.shape[0],):
            raise ValueError(
                f"weights shape {w.shape} does not match {pts.shape[0]} points"
            )
        if w.size and (not np.all(np.isfinite(w)) or not np.all(w > 0)):
            raise ValueError("weights must be positive and finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_points(cls, points) -> "Dataset":
        """Wrap raw points with unit weights.  A 1-D array is read as n
        one-dimensional points."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        return cls(pts, np.ones(pts.shape[0]))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def total_weight(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class SoftParams:
    """Fuzziness parameter ``m`` in the open interval (0, 1).

    The derived exponent ``g = 1/m - 1`` is always recomputed from ``m``.
    Small ``m`` makes memberships nearly hard; ``m`` close to 1 spreads them.
    """

    m: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.m) and 0.0 < self.m < 1.0):
            raise ValueError(f"fuzziness m must lie in (0, 1), got {self.m}")

    @property
    def g(self) -> float:
        return 1.0 / self.m - 1.0


def squared_distance(a, b) -> float:
    """Squared Euclidean distance between two points.

    Exactly zero only when the coordinate vectors are equal.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    diff = a - b
    return float(np.dot(diff, diff))


def _as_centers(centers, dim: int) -> np.ndarray:
    c = np.asarray(centers, dtype=np.float64)
    if c.ndim == 1:
        c = c[:, None]
    if c.ndim != 2 or c.shape[0] < 1:
        raise ValueError(f"centers must have shape (k, d), got {c.shape}")
    if c.shape[1] != dim:
        raise ValueError(
            f"dimension mismatch: centers have d={c.shape[1]}, data has d={dim}"
        )
    return c


def _require_points(data: Dataset) -> None:
    if data.n == 0:
        raise ValueError("dataset is empty")


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Pairwise squared distances, shape (n, k).

    Computed from explicit coordinate differences so an entry is exactly zero
    iff the point equals the center (no catastrophic cancellation).
    """
    out = np.empty((points.shape[0], centers.shape[0]))
    for j in range(centers.shape[0]):
        diff = points - centers[j]
        out[:, j] = np.einsum("nd,nd->n", diff, diff)
    return out


def hard_cost(data: Dataset, centers) -> float:
    """Weighted k-means potential: sum of w(x) * min_c ||x - c||^2."""
    _require_points(data)
    c = _as_centers(centers, data.dim)
    d2 = _sq_dists(data.points, c)
    return float(np.dot(data.weights, d2.min(axis=1)))


def _memberships_from_d2(d2: np.ndarray, params: SoftParams) -> np.ndarray:
    """Membership rows from a squared-distance matrix.

    Regular rows get u_i proportional to (d_min/d_i)^(2/m), which sums to one
    by construction and never overflows since every ratio is in (0, 1].
    A point at distance zero from one or more centers takes an indicator
    membership split uniformly over the coinciding centers.
    """
    d = np.sqrt(d2)
    dmin = d.min(axis=1)
    u = np.empty_like(d)
    zero = dmin == 0.0
    if np.any(zero):
        hits = d[zero] == 0.0
        u[zero] = hits / hits.sum(axis=1, keepdims=True)
    regular = ~zero
    if np.any(regular):
        ratios = dmin[regular, None] / d[regular]
        t = ratios ** (2.0 / params.m)
        u[regular] = t / t.sum(axis=1, keepdims=True)
    return u


def memberships(x, centers, params: SoftParams) -> np.ndarray:
    """Membership row of a single point over k centers; entries sum to 1."""
    x = np.asarray(x, dtype=np.float64).ravel()
    c = _as_centers(centers, x.shape[0])
    return _memberships_from_d2(_sq_dists(x[None, :], c), params)[0]


def membership_matrix(data: Dataset, centers, params: SoftParams) -> np.ndarray:
    """Membership rows for every point in the dataset, shape (n, k)."""
    _require_points(data)
    c = _as_centers(centers, data.dim)
    return _memberships_from_d2(_sq_dists(data.points, c), params)


def soft_centroids(data: Dataset, centers, params: SoftParams) -> np.ndarray:
    """Membership-weighted centroids: c_i = sum_x w u_i(x) x / sum_x w u_i(x).

    A center that receives zero total membership mass is left where it was.
    """
    _require_points(data)
    c = _as_centers(centers, data.dim)
    u = _memberships_from_d2(_sq_dists(data.points, c), params)
    wu = data.weights[:, None] * u
    mass = wu.sum(axis=0)
    out = c.copy()
    filled = mass > 0.0
    out[filled] = (wu.T @ data.points)[filled] / mass[filled, None]
    return out


def soft_cost(data: Dataset, centers, params: SoftParams) -> float:
    """Soft clustering potential: sum of w(x) * sum_i u_i(x) ||x - c_i||^2."""
    _require_points(data)
    c = _as_centers(centers, data.dim)
    d2 = _sq_dists(data.points, c)
    u = _memberships_from_d2(d2, params)
    return float(np.dot(data.weights, (u * d2).sum(axis=1)))


def soft_cost_closed(data: Dataset, centers, params: SoftParams) -> float:
    """Closed form of :func:`soft_cost` that never materializes memberships.

    Per point the value is d_min^2 * sum_i r_i^(2g) / sum_i r_i^(2/m) with
    r_i = d_min/d_i, algebraically identical to the membership form but
    evaluated through ratio powers so nothing overflows even for m near 0.
    A point sitting exactly on a center contributes 0, the limit value.
    """
    _require_points(data)
    c = _as_centers(centers, data.dim)
    d = np.sqrt(_sq_dists(data.points, c))
    dmin = d.min(axis=1)
    per_point = np.zeros(data.n)
    regular = dmin > 0.0
    if np.any(regular):
        r = dmin[regular, None] / d[regular]
        num = (r ** (2.0 * params.g)).sum(axis=1)
        den = (r ** (2.0 / params.m)).sum(axis=1)
        per_point[regular] = dmin[regular] ** 2 * num / den
    return float(np.dot(data.weights, per_point))


def approx_factor(k: int, params: SoftParams) -> float:
    """Competitive factor k^(m/(1-m)) by which hard centers over-pay the
    soft potential."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return float(k) ** (params.m / (1.0 - params.m))
