"""One-pass (cash register) streaming clusterer.

Points accumulate in a level-1 buffer; when an arrival would push a level
past the memory budget, the buffered points are compressed into a small
weighted summary by oversampled seeding (best of several runs) and pushed
one level up.  A query gathers every live weighted point and runs D^2
seeding over it, so the stream can keep going afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, _sq_dists
from .iterate import StopRule, lloyd_run
from .seeding import as_rng, best_of, kmeans_sharp, kmeanspp_seed, sharp_round_size

__all__ = ["CashRegisterStream", "StreamConfig", "compress_level"]


@dataclass(frozen=True)
class StreamConfig:
    """Budget and shape of the multi-level stream summary.

    ``memory`` is the maximum number of buffered (weighted) points per
    level and must exceed the size of one compressed summary, otherwise a
    level could never shrink.  ``sharp_runs`` defaults to ceil(log2 memory).
    """

    k: int
    memory: int
    levels: int = 4
    sharp_runs: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if self.memory <= self.summary_size:
            raise ValueError(
                f"memory={self.memory} must exceed the compressed summary "
                f"size k*ceil(3 log2 k)={self.summary_size}"
            )
        if self.sharp_runs is not None and self.sharp_runs < 1:
            raise ValueError("sharp_runs must be >= 1")

    @property
    def summary_size(self) -> int:
        return self.k * sharp_round_size(self.k)

    @property
    def effective_sharp_runs(self) -> int:
        if self.sharp_runs is not None:
            return self.sharp_runs
        return max(1, math.ceil(math.log2(self.memory)))


def _dedup(points: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    unique, inverse = np.unique(points, axis=0, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=weights, minlength=unique.shape[0])
    return unique, merged


def compress_level(buffer: Dataset, config: StreamConfig, rng=None) -> Dataset:
    """Compress one full level into a weighted summary of its points.

    Runs the oversampled seeder best-of-R, then assigns every buffered
    point to its nearest summary center (ties to the lowest index); each
    center's weight is the total weight assigned to it, so the summary
    carries exactly the buffer's mass.  Buffers with no more distinct
    points than the summary size pass through deduplicated but otherwise
    unchanged.
    """
    if buffer.n == 0:
        raise ValueError("cannot compress an empty buffer")
    rng = as_rng(rng)
    points, weights = _dedup(buffer.points, buffer.weights)
    if points.shape[0] <= config.summary_size:
        return Dataset(points, weights)

    distinct = Dataset(points, weights)
    centers = best_of(
        config.effective_sharp_runs,
        lambda ds, child: kmeans_sharp(ds, config.k, child),
        distinct,
        rng,
    )
    labels = np.argmin(_sq_dists(points, centers), axis=1)
    summary_w = np.bincount(labels, weights=weights, minlength=centers.shape[0])
    used = summary_w > 0.0
    return Dataset(centers[used], summary_w[used])


class CashRegisterStream:
    """Single-writer streaming state: ingest points, query centers anytime.

    Levels are created on demand up to ``config.levels``; once the top
    level fills it compresses in place, so no buffer ever holds more than
    ``memory`` points no matter how long the stream runs.
    """

    def __init__(self, config: StreamConfig):
        self.config = config
        self._rng = np.random.default_rng(config.seed)
        self._level_points: list[list[np.ndarray]] = [[]]
        self._level_weights: list[list[float]] = [[]]
        self._dim: int | None = None
        self._ingested = 0

    @property
    def ingested(self) -> int:
        return self._ingested

    @property
    def dim(self) -> int | None:
        return self._dim

    def level_sizes(self) -> list[int]:
        return [len(pts) for pts in self._level_points]

    def live_weight(self) -> float:
        return float(sum(sum(ws) for ws in self._level_weights))

    def live(self) -> Dataset:
        """Snapshot of all live weighted points, lowest level first."""
        if self._ingested == 0:
            raise ValueError("empty stream")
        rows: list[np.ndarray] = []
        weights: list[float] = []
        for pts, ws in zip(self._level_points, self._level_weights):
            rows.extend(pts)
            weights.extend(ws)
        return Dataset(np.vstack(rows), np.asarray(weights))

    def ingest(self, x) -> None:
        """Append one raw point (weight 1), compressing levels as needed."""
        x = np.asarray(x, dtype=np.float64).ravel()
        if self._dim is None:
            self._dim = x.shape[0]
        elif x.shape[0] != self._dim:
            raise ValueError(
                f"dimension mismatch: point has d={x.shape[0]}, stream has d={self._dim}"
            )
        self._receive(0, [x], [1.0])
        self._ingested += 1

    def _compress_buffer(self, rows: list[np.ndarray], weights: list[float]) -> Dataset:
        return compress_level(
            Dataset(np.vstack(rows), np.asarray(weights)), self.config, self._rng
        )

    def _receive(self, level: int, rows: list[np.ndarray], weights: list[float]) -> None:
        top = self.config.levels - 1
        level = min(level, top)
        while len(self._level_points) <= level:
            self._level_points.append([])
            self._level_weights.append([])
        cur_p = self._level_points[level]
        cur_w = self._level_weights[level]
        if len(cur_p) + len(rows) > self.config.memory:
            if level == top:
                # nowhere to push: fold everything into one in-place summary
                summary = self._compress_buffer(cur_p + rows, cur_w + weights)
                self._level_points[level] = list(summary.points)
                self._level_weights[level] = list(summary.weights)
                return
            summary = self._compress_buffer(cur_p, cur_w)
            self._level_points[level] = []
            self._level_weights[level] = []
            self._receive(level + 1, list(summary.points), list(summary.weights))
            cur_p = self._level_points[level]
            cur_w = self._level_weights[level]
        cur_p.extend(rows)
        cur_w.extend(weights)

    def finalize(
        self, rng=None, refine: bool = False, stop: StopRule = StopRule()
    ) -> np.ndarray:
        """Query k centers from the live summary; the stream stays usable.

        Runs weighted D^2 seeding over the gathered points and optionally a
        weighted Lloyd refinement on the same summary.
        """
        summary = self.live()
        centers = kmeanspp_seed(summary, self.config.k, as_rng(rng))
        if refine:
            centers, _ = lloyd_run(summary, centers, stop)
        return centers
