"""Sliding-window clusterer: block summaries with expiry.

The stream is cut into aligned segments of ``shift`` points.  Each segment
is compressed (possibly through intermediate levels) into one weighted
summary block whose span of raw stream positions is recorded; blocks are
dropped once their span falls entirely out of the window.  Because the
shift divides the window length, the live blocks cover the window exactly
whenever the stream position is a multiple of the shift (a checkpoint).
Between checkpoints a query linearly down-weights the oldest,
partially-expired block by the fraction of its span still inside the
window.

Tiny windows (no larger than one summary block) degrade to an exact ring
buffer.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import Dataset
from .seeding import as_rng, kmeanspp_seed, sharp_round_size
from .stream_cash import StreamConfig, compress_level

__all__ = ["SlidingWindowStream", "SummaryBlock", "WindowConfig"]


def _divisors(n: int) -> list[int]:
    out = set()
    for i in range(1, int(math.isqrt(n)) + 1):
        if n % i == 0:
            out.add(i)
            out.add(n // i)
    return sorted(out)


def _nearest_divisor(n: int, target: float) -> int:
    return min(_divisors(n), key=lambda d: (abs(d - target), d))


def _stage_spans(shift: int, stages: int) -> list[int]:
    """Cumulative raw spans of the compression stages; last equals shift."""
    factors = []
    rem = shift
    for left in range(stages, 0, -1):
        if left == 1:
            factors.append(rem)
            break
        f = _nearest_divisor(rem, rem ** (1.0 / left))
        factors.append(f)
        rem //= f
    spans = []
    acc = 1
    for f in factors:
        acc *= f
        spans.append(acc)
    return spans


@dataclass(frozen=True)
class WindowConfig:
    """Geometry of the sliding-window summary structure.

    ``epsilon`` trades memory for query staleness: it fixes the level count
    t = round(1/epsilon) - 1 and the nominal shift window^(1-2e) * B^(2e)
    with block size B = 3 k ceil(log2 k).  The actual shift is the divisor
    of ``window`` closest to the nominal value, so that checkpoints (stream
    positions divisible by the shift) land exactly on block boundaries.
    """

    window: int
    k: int
    epsilon: float = 1.0 / 3.0
    sharp_runs: int | None = None
    query_runs: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not (0.0 < self.epsilon < 0.5):
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if self.query_runs is not None and self.query_runs < 1:
            raise ValueError("query_runs must be >= 1")

    @property
    def levels(self) -> int:
        return max(1, round(1.0 / self.epsilon) - 1)

    @property
    def block_size(self) -> int:
        return max(self.k, 3 * self.k * math.ceil(math.log2(self.k)))

    @property
    def shift(self) -> int:
        nominal = self.window ** (1.0 - 2.0 * self.epsilon) * self.block_size ** (
            2.0 * self.epsilon
        )
        return _nearest_divisor(self.window, max(1.0, nominal))

    @property
    def ring_mode(self) -> bool:
        return self.levels < 2 or self.window <= self.block_size or self.shift >= self.window

    @property
    def effective_query_runs(self) -> int:
        """Seeding repetitions per query, log-many in the window length."""
        if self.query_runs is not None:
            return self.query_runs
        return max(1, math.ceil(math.log2(self.window)))

    def stream_config(self) -> StreamConfig:
        """Compression parameters shared with the cash-register machinery."""
        summary = self.k * sharp_round_size(self.k)
        return StreamConfig(
            k=self.k,
            memory=max(self.shift, summary + 1, 2 * summary),
            sharp_runs=self.sharp_runs,
            seed=self.seed,
        )


@dataclass(frozen=True)
class SummaryBlock:
    """Weighted summary of the raw points at stream positions [start, end)."""

    points: np.ndarray
    weights: np.ndarray
    start: int
    end: int

    @property
    def span(self) -> int:
        return self.end - self.start

    def weight(self) -> float:
        return float(self.weights.sum())


class SlidingWindowStream:
    """Single-writer sliding-window state: insert points, query anytime."""

    def __init__(self, config: WindowConfig):
        self.config = config
        self._rng = np.random.default_rng(config.seed)
        self._dim: int | None = None
        self._count = 0
        if config.ring_mode:
            self._ring: deque[np.ndarray] = deque(maxlen=config.window)
            return
        self._compress_config = config.stream_config()
        # cumulative raw span after each compression stage; the last stage
        # emits the summary blocks of span == shift
        self._spans = _stage_spans(config.shift, max(1, config.levels - 1))
        self._stage_points: list[list[np.ndarray]] = [[] for _ in self._spans]
        self._stage_weights: list[list[float]] = [[] for _ in self._spans]
        self._stage_start: list[int] = [0 for _ in self._spans]
        self._blocks: deque[SummaryBlock] = deque()

    @property
    def count(self) -> int:
        return self._count

    @property
    def shift(self) -> int:
        return 1 if self.config.ring_mode else self.config.shift

    def at_checkpoint(self) -> bool:
        """True when live summaries cover the window with nothing partial."""
        if self.config.ring_mode:
            return self._count > 0
        return self._count > 0 and self._count % self.config.shift == 0

    def window_start(self) -> int:
        return max(0, self._count - self.config.window)

    def insert(self, x) -> None:
        """Append one raw point, compressing and expiring as needed."""
        x = np.asarray(x, dtype=np.float64).ravel()
        if self._dim is None:
            self._dim = x.shape[0]
        elif x.shape[0] != self._dim:
            raise ValueError(
                f"dimension mismatch: point has d={x.shape[0]}, window has d={self._dim}"
            )
        self._count += 1
        if self.config.ring_mode:
            self._ring.append(x)
            return
        self._stage_points[0].append(x)
        self._stage_weights[0].append(1.0)
        self._cascade()
        self._expire()

    def _cascade(self) -> None:
        for stage, span in enumerate(self._spans):
            covered = self._count - self._stage_start[stage]
            if covered < span or not self._stage_points[stage]:
                break
            buffer = Dataset(
                np.vstack(self._stage_points[stage]),
                np.asarray(self._stage_weights[stage]),
            )
            summary = compress_level(buffer, self._compress_config, self._rng)
            start = self._stage_start[stage]
            self._stage_points[stage] = []
            self._stage_weights[stage] = []
            self._stage_start[stage] = self._count
            if stage + 1 < len(self._spans):
                self._stage_points[stage + 1].extend(summary.points)
                self._stage_weights[stage + 1].extend(summary.weights)
            else:
                self._blocks.append(
                    SummaryBlock(
                        points=summary.points,
                        weights=summary.weights,
                        start=start,
                        end=self._count,
                    )
                )

    def _expire(self) -> None:
        start = self.window_start()
        while self._blocks and self._blocks[0].end <= start:
            self._blocks.popleft()

    def blocks(self) -> list[SummaryBlock]:
        return list(self._blocks)

    def live_weight(self) -> float:
        """Total unscaled weight of blocks, stage buffers, and raw points."""
        if self._count == 0:
            return 0.0
        if self.config.ring_mode:
            return float(len(self._ring))
        total = sum(b.weight() for b in self._blocks)
        total += sum(sum(ws) for ws in self._stage_weights)
        return float(total)

    def live_point_count(self) -> int:
        """Number of stored weighted points (the memory actually used)."""
        if self.config.ring_mode:
            return len(self._ring)
        return sum(b.points.shape[0] for b in self._blocks) + sum(
            len(p) for p in self._stage_points
        )

    def window_contents(self, scaled: bool = True) -> Dataset:
        """Live weighted points covering the window, oldest first.

        With ``scaled`` the partially-expired oldest block is down-weighted
        by the fraction of its span still inside the window, so the total
        weight equals min(count, window) up to rounding.
        """
        if self._count == 0:
            raise ValueError("empty window")
        if self.config.ring_mode:
            return Dataset.from_points(np.vstack(list(self._ring)))
        start = self.window_start()
        rows: list[np.ndarray] = []
        weights: list[np.ndarray] = []
        for block in self._blocks:
            w = block.weights
            if scaled and block.start < start:
                w = w * ((block.end - start) / block.span)
            rows.append(block.points)
            weights.append(np.asarray(w, dtype=np.float64))
        for stage in reversed(range(len(self._spans))):
            if self._stage_points[stage]:
                rows.append(np.vstack(self._stage_points[stage]))
                weights.append(np.asarray(self._stage_weights[stage]))
        return Dataset(np.vstack(rows), np.concatenate(weights))

    def query(self, rng=None) -> np.ndarray:
        """k centers for the current window by weighted D^2 seeding."""
        contents = self.window_contents(scaled=True)
        return kmeanspp_seed(contents, self.config.k, as_rng(rng))
