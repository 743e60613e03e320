"""Hard and soft (fuzzy) k-means with careful seeding, plus one-pass and
sliding-window streaming clusterers built on weighted summaries."""

from .core import (
    Dataset,
    SoftParams,
    approx_factor,
    hard_cost,
    membership_matrix,
    memberships,
    soft_centroids,
    soft_cost,
    soft_cost_closed,
    squared_distance,
)
from .iterate import IterationReport, StopRule, em_plus_plus, em_run, lloyd_run
from .oracle import BruteForceResult, brute_force_kmeans, power_mean_check, sandwich_check
from .seeding import SeedingTrace, as_rng, best_of, kmeans_sharp, kmeanspp_seed, sharp_round_size
from .stream_cash import CashRegisterStream, StreamConfig, compress_level
from .stream_window import SlidingWindowStream, SummaryBlock, WindowConfig

__version__ = "0.1.0"

__all__ = [
    "BruteForceResult",
    "CashRegisterStream",
    "Dataset",
    "IterationReport",
    "SeedingTrace",
    "SlidingWindowStream",
    "SoftParams",
    "StopRule",
    "StreamConfig",
    "SummaryBlock",
    "WindowConfig",
    "approx_factor",
    "as_rng",
    "best_of",
    "brute_force_kmeans",
    "compress_level",
    "em_plus_plus",
    "em_run",
    "hard_cost",
    "kmeans_sharp",
    "kmeanspp_seed",
    "lloyd_run",
    "membership_matrix",
    "memberships",
    "power_mean_check",
    "sandwich_check",
    "sharp_round_size",
    "soft_centroids",
    "soft_cost",
    "soft_cost_closed",
    "squared_distance",
    "__version__",
]
