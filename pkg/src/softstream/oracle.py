"""Independent ground truth for small instances and inequality checkers.

Everything here is deliberately separate from the production code paths: the
exact optimum comes from enumerating assignments, and the inequality checks
re-evaluate both sides from scratch.  Test suites use this module as the
source of expected values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, SoftParams, _as_centers, approx_factor, hard_cost, soft_cost

__all__ = [
    "BruteForceResult",
    "brute_force_kmeans",
    "power_mean_check",
    "sandwich_check",
]

_MAX_ASSIGNMENTS = 10_000_000
_CHUNK = 1 << 16


@dataclass(frozen=True)
class BruteForceResult:
    """Globally optimal assignment, centers, and cost of a tiny instance."""

    assignment: np.ndarray  # (n,) labels in 0..k-1
    centers: np.ndarray  # (k, d) part centroids
    cost: float


def brute_force_kmeans(data: Dataset, k: int) -> BruteForceResult:
    """Exact k-means optimum by enumerating all k^n assignments.

    Only feasible for desk-scale instances; refuses anything with more than
    ten million assignments.  Deterministic: among equally optimal
    assignments the first in mixed-radix order wins.
    """
    if data.n == 0:
        raise ValueError("dataset is empty")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = data.n
    if k**n > _MAX_ASSIGNMENTS:
        raise ValueError(
            f"instance too large for enumeration: {k}^{n} > {_MAX_ASSIGNMENTS}"
        )

    X = data.points
    w = data.weights
    wx = w[:, None] * X
    total_sq = float(np.dot(w, np.einsum("nd,nd->n", X, X)))
    powers = k ** np.arange(n, dtype=np.int64)

    total = k**n
    best_cost = np.inf
    best_id = 0
    for start in range(0, total, _CHUNK):
        ids = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (ids[:, None] // powers) % k
        # cost(a) = total_sq - sum_parts |sum w x|^2 / sum w, so maximizing
        # the reduction term minimizes the cost
        reduction = np.zeros(len(ids))
        for j in range(k):
            mask = (digits == j).astype(np.float64)
            wj = mask @ w
            sxj = mask @ wx
            filled = wj > 0.0
            reduction[filled] += (sxj[filled] ** 2).sum(axis=1) / wj[filled]
        costs = total_sq - reduction
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best_cost = float(costs[i])
            best_id = int(ids[i])

    assignment = ((best_id // powers) % k).astype(np.intp)
    centers = np.empty((k, data.dim))
    fallback = None
    for j in range(k):
        members = assignment == j
        if members.any():
            wj = w[members]
            centers[j] = wj @ X[members] / wj.sum()
            if fallback is None:
                fallback = centers[j].copy()
    for j in range(k):
        if not (assignment == j).any():
            centers[j] = fallback  # empty parts duplicate a used centroid
    # recompute directly; the subtraction trick above can lose a few ulp
    cost = hard_cost(data, centers)
    return BruteForceResult(assignment=assignment, centers=centers, cost=cost)


def power_mean_check(a, p: float, rel_slack: float = 1e-12) -> bool:
    """Check sum a_i^p >= k^(1-p) (sum a_i)^p for p >= 1, nonnegative a.

    This is the convexity inequality behind the soft-vs-hard bound.  Both
    sides are evaluated after normalizing by max(a) so that large p cannot
    overflow.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    if a.size == 0:
        raise ValueError("need at least one entry")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError("entries must be nonnegative and finite")
    if p < 1.0:
        raise ValueError(f"exponent must be >= 1, got {p}")
    amax = float(a.max())
    if amax == 0.0:
        return True
    s = a / amax
    lhs = float((s**p).sum())
    rhs = float(len(a) ** (1.0 - p) * s.sum() ** p)
    return lhs >= rhs - rel_slack * max(lhs, rhs)


def sandwich_check(
    data: Dataset, centers, params: SoftParams, rel_tol: float = 1e-9
) -> tuple[bool, bool, float]:
    """Verify hard <= soft <= k^(m/(1-m)) * hard for one instance.

    Returns (lower_ok, upper_ok, ratio) where ratio = soft/hard tracks the
    tightness of the upper bound.  Both potentials zero means every point
    sits on a center; the ratio is 1 by convention.
    """
    c = _as_centers(centers, data.dim)
    hard = hard_cost(data, c)
    soft = soft_cost(data, c, params)
    factor = approx_factor(c.shape[0], params)
    if hard == 0.0:
        ok = soft == 0.0
        return ok, ok, 1.0 if ok else float("inf")
    lower_ok = soft >= hard * (1.0 - rel_tol)
    upper_ok = soft <= factor * hard * (1.0 + rel_tol)
    return lower_ok, upper_ok, soft / hard
