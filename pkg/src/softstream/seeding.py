"""Randomized center initialization.

Three entry points: D^2-weighted seeding that returns exactly k centers,
an oversampled variant that returns roughly 3 k log k centers in k rounds,
and a best-of-R wrapper that keeps the cheapest run.  All sampling mass is
w(x) * D(x)^2, so compressed stream summaries seed the same way a raw
point cloud of equal mass would.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import Dataset, hard_cost, _sq_dists

__all__ = [
    "SeedingTrace",
    "as_rng",
    "best_of",
    "kmeans_sharp",
    "kmeanspp_seed",
    "sharp_round_size",
]

def as_rng(rng) -> np.random.Generator:
    """Coerce an int seed (or None) into a numpy Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sharp_round_size(k: int) -> int:
    """Centers drawn per oversampling round: max(1, ceil(3 log2 k))."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return max(1, math.ceil(3.0 * math.log2(k))) if k > 1 else 1


@dataclass
class SeedingTrace:
    """Optional record of a seeding run, mainly for tests.

    ``chosen`` holds the selected point indices in order, ``step_mass`` the
    total sampling mass available at each selection, and ``degenerate`` is
    set when the sampling mass ran out before the requested number of
    centers existed.
    """

    chosen: list[int] = field(default_factory=list)
    step_mass: list[float] = field(default_factory=list)
    degenerate: bool = False


def _draw_index(mass: np.ndarray, rng: np.random.Generator) -> tuple[int, float]:
    """Inverse-transform draw proportional to ``mass``; returns (index, total).

    A total of zero signals degenerate mass and yields index -1.  Entries
    with zero mass are never selected.
    """
    cum = np.cumsum(mass)
    total = float(cum[-1])
    if total <= 0.0:
        return -1, 0.0
    u = rng.random() * total
    idx = int(np.searchsorted(cum, u, side="right"))
    if idx >= mass.shape[0]:  # guard against u rounding up onto the total
        idx = int(np.flatnonzero(mass > 0)[-1])
    return idx, total


def kmeanspp_seed(
    data: Dataset,
    k: int,
    rng=None,
    trace: SeedingTrace | None = None,
) -> np.ndarray:
    """Draw exactly k centers from the data by weighted D^2 sampling.

    The first center is drawn with probability proportional to the point
    weight, each later one proportional to w(x) * D(x)^2 where D(x) is the
    distance to the nearest already-chosen center.  If every remaining point
    coincides with a chosen center before k draws are made, the remaining
    slots repeat existing centers and the trace is flagged degenerate.
    """
    if data.n == 0:
        raise ValueError("dataset is empty")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    rng = as_rng(rng)
    X, w = data.points, data.weights

    chosen: list[int] = []
    d2 = None
    for step in range(k):
        mass = w if step == 0 else w * d2
        idx, total = _draw_index(mass, rng)
        if idx < 0:
            if trace is not None:
                trace.degenerate = True
            while len(chosen) < k:
                chosen.append(chosen[len(chosen) % step])
            break
        if trace is not None:
            trace.chosen.append(idx)
            trace.step_mass.append(total)
        chosen.append(idx)
        new_d2 = _sq_dists(X, X[idx][None, :])[:, 0]
        d2 = new_d2 if d2 is None else np.minimum(d2, new_d2)
    return X[chosen].copy()


def kmeans_sharp(
    data: Dataset,
    k: int,
    rng=None,
    trace: SeedingTrace | None = None,
) -> np.ndarray:
    """Oversampled seeding: k rounds of sharp_round_size(k) draws each.

    The first round samples by weight alone (skipping points that already
    coincide with a chosen center), later rounds by w(x) * D(x)^2.  Returns
    k * sharp_round_size(k) centers, or every distinct point when the data
    holds fewer than that.
    """
    if data.n == 0:
        raise ValueError("dataset is empty")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    rng = as_rng(rng)
    X, w = data.points, data.weights
    per_round = sharp_round_size(k)

    chosen: list[int] = []
    d2 = None
    for rnd in range(k):
        for _ in range(per_round):
            if not chosen:
                mass = w
            elif rnd == 0:
                mass = np.where(d2 > 0.0, w, 0.0)
            else:
                mass = w * d2
            idx, total = _draw_index(mass, rng)
            if idx < 0:
                # every distinct point is already a center
                if trace is not None:
                    trace.degenerate = True
                return X[chosen].copy()
            if trace is not None:
                trace.chosen.append(idx)
                trace.step_mass.append(total)
            chosen.append(idx)
            new_d2 = _sq_dists(X, X[idx][None, :])[:, 0]
            d2 = new_d2 if d2 is None else np.minimum(d2, new_d2)
    return X[chosen].copy()


def best_of(
    runs: int,
    seeder: Callable[[Dataset, np.random.Generator], np.ndarray],
    data: Dataset,
    rng=None,
) -> np.ndarray:
    """Run a seeding procedure several times and keep the cheapest output.

    Each run gets an independent child generator spawned from ``rng``, so a
    single run is identical to calling the seeder with the first spawn.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    rng = as_rng(rng)
    best = None
    best_cost = np.inf
    for child in rng.spawn(runs):
        centers = seeder(data, child)
        cost = hard_cost(data, centers)
        if cost < best_cost:
            best, best_cost = centers, cost
    return best
