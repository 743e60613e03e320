"""Refinement loops: weighted Lloyd iterations and the soft-clustering EM loop.

Both loops alternate an assignment step with a centroid update until a
:class:`StopRule` fires.  Lloyd's potential is non-increasing by
construction; the soft potential is recorded every iteration but not assumed
monotone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Dataset,
    SoftParams,
    _as_centers,
    _memberships_from_d2,
    _require_points,
    _sq_dists,
)
from .seeding import as_rng, kmeanspp_seed

__all__ = ["IterationReport", "StopRule", "em_plus_plus", "em_run", "lloyd_run"]


@dataclass(frozen=True)
class StopRule:
    """Termination criteria; every field is active, max_iters is the backstop."""

    max_iters: int = 300
    rel_tol: float = 1e-6  # relative potential change
    move_tol: float = 1e-8  # max center displacement

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.rel_tol < 0 or self.move_tol < 0:
            raise ValueError("tolerances must be nonnegative")


@dataclass
class IterationReport:
    """What a refinement run did: counts, potentials, and wall time.

    ``potentials[0]`` is the potential of the initial centers and each
    later entry the potential after one more full iteration, so
    ``potentials[-1] == final_potential``.
    """

    iterations: int
    initial_potential: float
    final_potential: float
    converged: bool
    wall_time: float
    seed_time: float = 0.0
    potentials: list[float] = field(default_factory=list)


def _max_displacement(old: np.ndarray, new: np.ndarray) -> float:
    return float(np.sqrt(((new - old) ** 2).sum(axis=1).max()))


def _stopped(stop: StopRule, prev: float, cur: float, move: float) -> bool:
    if cur == 0.0:  # every point sits on a center: a guaranteed fixed point
        return True
    if move <= stop.move_tol:
        return True
    scale = max(abs(prev), abs(cur))
    return abs(prev - cur) <= stop.rel_tol * scale


def lloyd_run(
    data: Dataset, init, stop: StopRule = StopRule()
) -> tuple[np.ndarray, IterationReport]:
    """Weighted Lloyd iterations from the given initial centers.

    Assignment ties go to the lowest center index and a cluster that loses
    all its points keeps its previous center, so the potential never
    increases from one iteration to the next.
    """
    _require_points(data)
    centers = _as_centers(init, data.dim).copy()
    X, w = data.points, data.weights
    k = centers.shape[0]

    t0 = time.perf_counter()
    d2 = _sq_dists(X, centers)
    potential = float(np.dot(w, d2.min(axis=1)))
    potentials = [potential]
    converged = False
    iterations = 0
    for _ in range(stop.max_iters):
        iterations += 1
        labels = np.argmin(d2, axis=1)
        new_centers = centers.copy()
        wsum = np.bincount(labels, weights=w, minlength=k)
        filled = wsum > 0.0
        for dim in range(data.dim):
            col = np.bincount(labels, weights=w * X[:, dim], minlength=k)
            new_centers[filled, dim] = col[filled] / wsum[filled]
        move = _max_displacement(centers, new_centers)
        centers = new_centers
        d2 = _sq_dists(X, centers)
        new_potential = float(np.dot(w, d2.min(axis=1)))
        potentials.append(new_potential)
        if _stopped(stop, potential, new_potential, move):
            potential = new_potential
            converged = True
            break
        potential = new_potential
    report = IterationReport(
        iterations=iterations,
        initial_potential=potentials[0],
        final_potential=potentials[-1],
        converged=converged,
        wall_time=time.perf_counter() - t0,
        potentials=potentials,
    )
    return centers, report


def em_run(
    data: Dataset, init, params: SoftParams, stop: StopRule = StopRule()
) -> tuple[np.ndarray, IterationReport]:
    """Alternate membership and centroid updates until the stop rule fires.

    The recorded potential is the soft objective of the centers entering
    each iteration; it is logged, not asserted monotone.  A center with no
    membership mass stays put.
    """
    _require_points(data)
    centers = _as_centers(init, data.dim).copy()
    X, w = data.points, data.weights

    t0 = time.perf_counter()
    d2 = _sq_dists(X, centers)
    u = _memberships_from_d2(d2, params)
    potential = float(np.dot(w, (u * d2).sum(axis=1)))
    potentials = [potential]
    converged = False
    iterations = 0
    for _ in range(stop.max_iters):
        iterations += 1
        wu = w[:, None] * u
        mass = wu.sum(axis=0)
        new_centers = centers.copy()
        filled = mass > 0.0
        new_centers[filled] = (wu.T @ X)[filled] / mass[filled, None]
        move = _max_displacement(centers, new_centers)
        centers = new_centers
        d2 = _sq_dists(X, centers)
        u = _memberships_from_d2(d2, params)
        new_potential = float(np.dot(w, (u * d2).sum(axis=1)))
        potentials.append(new_potential)
        if _stopped(stop, potential, new_potential, move):
            potential = new_potential
            converged = True
            break
        potential = new_potential
    report = IterationReport(
        iterations=iterations,
        initial_potential=potentials[0],
        final_potential=potentials[-1],
        converged=converged,
        wall_time=time.perf_counter() - t0,
        potentials=potentials,
    )
    return centers, report


def em_plus_plus(
    data: Dataset,
    k: int,
    params: SoftParams,
    stop: StopRule = StopRule(),
    rng=None,
) -> tuple[np.ndarray, IterationReport]:
    """D^2-seeded EM: initialize with kmeanspp_seed, then run em_run.

    The report's ``seed_time`` holds the seeding wall time on top of the
    iteration time.
    """
    rng = as_rng(rng)
    t0 = time.perf_counter()
    init = kmeanspp_seed(data, k, rng)
    seed_time = time.perf_counter() - t0
    centers, report = em_run(data, init, params, stop)
    report.seed_time = seed_time
    return centers, report
