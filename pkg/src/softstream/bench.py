"""Trial runner comparing random-init EM against D^2-seeded EM, plus
streaming drivers, with table emission in the style of the reference
experiments (average potential, minimum potential, average wall time, and
the percentage improvement of the seeded variant)."""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, SoftParams, soft_cost
from .datasets import load_dataset
from .iterate import StopRule, em_plus_plus, em_run
from .seeding import sharp_round_size
from .stream_cash import CashRegisterStream, StreamConfig
from .stream_window import SlidingWindowStream, WindowConfig

__all__ = ["AlgoStats", "ExperimentSpec", "StatRow", "TrialStats", "emit_table", "run_experiment"]

_ALGOS = ("em", "empp", "stream", "window")


@dataclass(frozen=True)
class ExperimentSpec:
    """One benchmark request: dataset, (m, k) grid, trial count, algorithms."""

    dataset: str
    ks: tuple[int, ...]
    ms: tuple[float, ...]
    trials: int = 20
    seed: int = 0
    algos: tuple[str, ...] = ("em", "empp")
    stop: StopRule = field(default_factory=StopRule)
    data_dir: str = "."
    stream_memory: int | None = None
    window: int | None = None
    epsilon: float = 1.0 / 3.0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.ks or not self.ms:
            raise ValueError("need at least one k and one m")
        unknown = [a for a in self.algos if a not in _ALGOS]
        if unknown or not self.algos:
            raise ValueError(f"algos must be among {_ALGOS}, got {self.algos}")
        if "window" in self.algos and self.window is None:
            raise ValueError("window algorithm requires a window length")


@dataclass(frozen=True)
class AlgoStats:
    avg_potential: float
    min_potential: float
    avg_time: float


@dataclass(frozen=True)
class StatRow:
    m: float
    k: int
    algos: dict[str, AlgoStats]


@dataclass(frozen=True)
class TrialStats:
    rows: tuple[StatRow, ...]


def _trial_rng(spec: ExperimentSpec, algo_i: int, m_i: int, k_i: int, trial: int):
    # each trial draws from its own seed path, so results do not depend on
    # which sibling trials ran
    return np.random.default_rng([spec.seed, algo_i, m_i, k_i, trial])


def _run_trial(
    algo: str, data: Dataset, k: int, params: SoftParams, spec: ExperimentSpec, rng
) -> tuple[float, float]:
    """Execute one seeded trial; returns (final potential, wall seconds)."""
    t0 = time.perf_counter()
    if algo == "em":
        idx = rng.choice(data.n, size=min(k, data.n), replace=False)
        centers, report = em_run(data, data.points[idx], params, spec.stop)
        return report.final_potential, time.perf_counter() - t0
    if algo == "empp":
        centers, report = em_plus_plus(data, k, params, spec.stop, rng)
        return report.final_potential, time.perf_counter() - t0
    if algo == "stream":
        memory = spec.stream_memory
        if memory is None:
            memory = max(10 * k * sharp_round_size(k), 100)
        config = StreamConfig(k=k, memory=memory, seed=int(rng.integers(2**63)))
        stream = CashRegisterStream(config)
        for x in data.points:
            stream.ingest(x)
        centers = stream.finalize(rng)
        return soft_cost(data, centers, params), time.perf_counter() - t0
    if algo == "window":
        config = WindowConfig(
            window=spec.window, k=k, epsilon=spec.epsilon, seed=int(rng.integers(2**63))
        )
        window = SlidingWindowStream(config)
        for x in data.points:
            window.insert(x)
        centers = window.query(rng)
        return soft_cost(data, centers, params), time.perf_counter() - t0
    raise ValueError(f"unknown algorithm {algo!r}")


def run_experiment(spec: ExperimentSpec, data: Dataset | None = None) -> TrialStats:
    """Run every (m, k, algorithm) cell of the spec for ``spec.trials``
    seeded repetitions and aggregate average/minimum potential and mean
    wall time.  Potentials are deterministic under a fixed spec seed."""
    if data is None:
        data = load_dataset(spec.dataset, spec.data_dir)
    rows = []
    for m_i, m in enumerate(spec.ms):
        params = SoftParams(m)
        for k_i, k in enumerate(spec.ks):
            algo_stats: dict[str, AlgoStats] = {}
            for a_i, algo in enumerate(spec.algos):
                potentials = np.empty(spec.trials)
                times = np.empty(spec.trials)
                for trial in range(spec.trials):
                    rng = _trial_rng(spec, a_i, m_i, k_i, trial)
                    potentials[trial], times[trial] = _run_trial(
                        algo, data, k, params, spec, rng
                    )
                algo_stats[algo] = AlgoStats(
                    avg_potential=float(potentials.mean()),
                    min_potential=float(potentials.min()),
                    avg_time=float(times.mean()),
                )
            rows.append(StatRow(m=m, k=k, algos=algo_stats))
    return TrialStats(rows=tuple(rows))


def improvement_pct(base: float, other: float) -> float | None:
    """Percentage improvement of ``other`` over ``base``: 100 * (1 - other/base)."""
    if base == 0.0:
        return None
    return 100.0 * (1.0 - other / base)


def _paper_cells(row: StatRow) -> list[tuple[float, float | None]]:
    em = row.algos["em"]
    pp = row.algos["empp"]
    return [
        (em.avg_potential, improvement_pct(em.avg_potential, pp.avg_potential)),
        (em.min_potential, improvement_pct(em.min_potential, pp.min_potential)),
        (em.avg_time, improvement_pct(em.avg_time, pp.avg_time)),
    ]


def emit_table(stats: TrialStats, format: str = "md") -> str:
    """Render trial statistics as markdown (default) or CSV text.

    When both ``em`` and ``empp`` were run, columns follow the comparison
    layout: the EM value next to the EM++ improvement percentage for the
    average potential, minimum potential, and average time.  Otherwise one
    long-format row per (m, k, algorithm) is emitted.
    """
    if not stats.rows:
        raise ValueError("no statistics to emit")
    fmt = (format or "md").strip().lower()
    if fmt not in ("md", "markdown", "csv"):
        raise ValueError(f"unknown format {format!r}")
    paper_layout = all("em" in r.algos and "empp" in r.algos for r in stats.rows)

    out = io.StringIO()
    if fmt == "csv":
        if paper_layout:
            out.write(
                "m,k,em_avg_phi,empp_avg_phi_improvement_pct,"
                "em_min_phi,empp_min_phi_improvement_pct,"
                "em_avg_time_s,empp_time_improvement_pct\n"
            )
            for row in stats.rows:
                cells: list[str] = [repr(float(row.m)), repr(int(row.k))]
                for value, impr in _paper_cells(row):
                    cells.append(repr(float(value)))
                    cells.append("" if impr is None else f"{impr:.2f}")
                out.write(",".join(cells) + "\n")
        else:
            out.write("m,k,algo,avg_phi,min_phi,avg_time_s\n")
            for row in stats.rows:
                for algo, st in row.algos.items():
                    out.write(
                        f"{row.m!r},{row.k!r},{algo},{st.avg_potential!r},"
                        f"{st.min_potential!r},{st.avg_time!r}\n"
                    )
        return out.getvalue()

    if paper_layout:
        out.write(
            "| m | k | EM avg phi | EM++ impr | EM min phi | EM++ impr "
            "| EM avg T (s) | EM++ impr |\n"
        )
        out.write("|---|---|---|---|---|---|---|---|\n")
        for row in stats.rows:
            cells = [f"{row.m:g}", f"{row.k}"]
            for value, impr in _paper_cells(row):
                cells.append(f"{value:.6g}")
                cells.append("n/a" if impr is None else f"{impr:.2f}%")
            out.write("| " + " | ".join(cells) + " |\n")
    else:
        out.write("| m | k | algo | avg phi | min phi | avg T (s) |\n")
        out.write("|---|---|---|---|---|---|\n")
        for row in stats.rows:
            for algo, st in row.algos.items():
                out.write(
                    f"| {row.m:g} | {row.k} | {algo} | {st.avg_potential:.6g} "
                    f"| {st.min_potential:.6g} | {st.avg_time:.6g} |\n"
                )
    return out.getvalue()
