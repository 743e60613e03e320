"""Command-line harness.

Subcommands:

* ``cluster bench``  -- EM vs EM++ trial grids with table output
* ``cluster stream`` -- one-pass clustering of a point stream
* ``cluster window`` -- sliding-window clustering of a point stream
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bench import ExperimentSpec, emit_table, run_experiment
from .core import SoftParams, hard_cost, soft_cost
from .datasets import load_dataset
from .iterate import StopRule
from .stream_cash import CashRegisterStream, StreamConfig
from .stream_window import SlidingWindowStream, WindowConfig

__all__ = ["main"]


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v)


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _centers_csv(centers: np.ndarray) -> str:
    header = ",".join(f"x{j}" for j in range(centers.shape[1]))
    rows = [",".join(repr(float(v)) for v in row) for row in centers]
    return header + "\n" + "\n".join(rows) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cluster",
        description="Hard/soft k-means benchmarks and streaming clusterers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run EM vs EM++ trial grids")
    bench.add_argument("--dataset", required=True,
                       help="spam | cloud | csv:PATH | synth:n=..,d=..,c=..,sep=..")
    bench.add_argument("--k", type=_int_list, default=(10, 25, 50))
    bench.add_argument("--m", type=_float_list, default=(0.1, 0.25, 0.5))
    bench.add_argument("--trials", type=int, default=20)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--algo", type=lambda s: tuple(s.split(",")),
                       default=("em", "empp"))
    bench.add_argument("--out", default=None)
    bench.add_argument("--format", default="md", help="md or csv")
    bench.add_argument("--data-dir", default=".")
    bench.add_argument("--max-iters", type=int, default=300)
    bench.add_argument("--memory", type=int, default=None,
                       help="stream memory budget (stream algo only)")
    bench.add_argument("--window", type=int, default=None,
                       help="window length (window algo only)")
    bench.add_argument("--epsilon", type=float, default=1.0 / 3.0)

    stream = sub.add_parser("stream", help="one-pass stream clustering")
    stream.add_argument("--dataset", required=True)
    stream.add_argument("--memory", type=int, required=True)
    stream.add_argument("--k", type=int, required=True)
    stream.add_argument("--seed", type=int, default=0)
    stream.add_argument("--refine", action="store_true",
                        help="polish the queried centers with weighted Lloyd")
    stream.add_argument("--out", default=None)
    stream.add_argument("--data-dir", default=".")

    window = sub.add_parser("window", help="sliding-window stream clustering")
    window.add_argument("--dataset", required=True)
    window.add_argument("--window", type=int, required=True)
    window.add_argument("--epsilon", type=float, default=1.0 / 3.0)
    window.add_argument("--k", type=int, required=True)
    window.add_argument("--seed", type=int, default=0)
    window.add_argument("--out", default=None)
    window.add_argument("--data-dir", default=".")

    return parser


def _cmd_bench(args) -> int:
    spec = ExperimentSpec(
        dataset=args.dataset,
        ks=args.k,
        ms=args.m,
        trials=args.trials,
        seed=args.seed,
        algos=args.algo,
        stop=StopRule(max_iters=args.max_iters),
        data_dir=args.data_dir,
        stream_memory=args.memory,
        window=args.window,
        epsilon=args.epsilon,
    )
    stats = run_experiment(spec)
    _write_output(emit_table(stats, args.format), args.out)
    return 0


def _cmd_stream(args) -> int:
    data = load_dataset(args.dataset, args.data_dir)
    config = StreamConfig(k=args.k, memory=args.memory, seed=args.seed)
    stream = CashRegisterStream(config)
    for x in data.points:
        stream.ingest(x)
    centers = stream.finalize(np.random.default_rng(args.seed), refine=args.refine)
    _write_output(_centers_csv(centers), args.out)
    cost = hard_cost(data, centers)
    print(f"ingested {stream.ingested} points, hard cost {cost:.6g}", file=sys.stderr)
    return 0


def _cmd_window(args) -> int:
    data = load_dataset(args.dataset, args.data_dir)
    config = WindowConfig(window=args.window, k=args.k,
                          epsilon=args.epsilon, seed=args.seed)
    window = SlidingWindowStream(config)
    for x in data.points:
        window.insert(x)
    centers = window.query(np.random.default_rng(args.seed))
    _write_output(_centers_csv(centers), args.out)
    print(
        f"ingested {window.count} points, shift {window.shift}, "
        f"live weight {window.live_weight():.6g}",
        file=sys.stderr,
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "stream":
            return _cmd_stream(args)
        if args.command == "window":
            return _cmd_window(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
