"""Dataset ingestion: CSV files, the two named UCI benchmarks, and
synthetic Gaussian mixtures.

The named datasets are not fetched over the network; point the loader at a
local copy (see the README for the UCI download locations).  ``spam`` is
expected as 4601 rows of 58 numeric columns (57 features plus the label
column, all used as coordinates), ``cloud`` as 1024 rows of 10 columns.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .core import Dataset

__all__ = ["load_dataset", "parse_points_csv", "synth_mixture"]

_NAMED_SHAPES = {"spam": (4601, 58), "cloud": (1024, 10)}
_NAMED_FILES = {"spam": "spambase.data", "cloud": "cloud.data"}


def _parse_cell(cell: str, line_no: int, col_no: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ValueError(
            f"non-numeric value {cell.strip()!r} at row {line_no}, column {col_no}"
        ) from None


def parse_points_csv(path) -> Dataset:
    """Read one point per row of comma-separated numbers, unit weights.

    A first row with any non-numeric cell is treated as a header and
    skipped.  Row numbers in error messages count file lines from 1.
    """
    rows: list[list[float]] = []
    dim: int | None = None
    first_candidate = True
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if first_candidate:
                first_candidate = False
                try:
                    rows.append([float(c) for c in cells])
                    dim = len(cells)
                except ValueError:
                    pass  # header row
                continue
            if dim is not None and len(cells) != dim:
                raise ValueError(
                    f"row {line_no} has {len(cells)} values, expected {dim}"
                )
            rows.append(
                [_parse_cell(c, line_no, j + 1) for j, c in enumerate(cells)]
            )
            if dim is None:
                dim = len(cells)
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return Dataset.from_points(np.asarray(rows))


def _parse_synth_spec(spec: str) -> dict:
    options = {"n": 1000, "d": 2, "components": 4, "separation": 10.0, "seed": 0}
    aliases = {"c": "components", "sep": "separation"}
    if spec:
        for item in spec.split(","):
            if not item:
                continue
            key, _, value = item.partition("=")
            key = aliases.get(key.strip(), key.strip())
            if key not in options:
                raise ValueError(f"unknown synth option {key!r}")
            options[key] = float(value) if key == "separation" else int(value)
    return options


def load_dataset(source: str, data_dir=".") -> Dataset:
    """Resolve a dataset source string.

    Accepted forms: ``csv:PATH``, ``synth:n=..,d=..,c=..,sep=..,seed=..``,
    ``spam``/``cloud`` (optionally ``spam:PATH``), or a bare file path.
    The named datasets must match their published shapes.
    """
    kind, _, rest = source.partition(":")
    kind = kind.strip().lower()
    if kind == "synth":
        opts = _parse_synth_spec(rest)
        return synth_mixture(
            opts["n"], opts["d"], opts["components"], opts["separation"], opts["seed"]
        )
    if kind == "csv":
        return parse_points_csv(rest)
    if kind in _NAMED_SHAPES:
        path = Path(rest) if rest else Path(data_dir) / _NAMED_FILES[kind]
        data = parse_points_csv(path)
        n, d = _NAMED_SHAPES[kind]
        if data.dim != d:
            raise ValueError(
                f"{kind} dataset at {path} has d={data.dim}, expected d={d}"
            )
        if data.n != n:
            raise ValueError(
                f"{kind} dataset at {path} has n={data.n}, expected n={n}"
            )
        return data
    return parse_points_csv(source)


def synth_mixture(
    n: int, d: int, components: int, separation: float, seed: int = 0
) -> Dataset:
    """Equal-size isotropic Gaussian mixture with well-separated means.

    Component means are rescaled so every pair is at least ``separation``
    apart (in units of the unit component sigma).  Deterministic per seed.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if components < 1:
        raise ValueError(f"components must be >= 1, got {components}")
    rng = np.random.default_rng(seed)
    means = rng.normal(size=(components, d))
    if components > 1:
        gaps = [
            math.dist(means[i], means[j])
            for i in range(components)
            for j in range(i + 1, components)
        ]
        smallest = min(gaps)
        while smallest == 0.0:  # astronomically unlikely; redraw
            means = rng.normal(size=(components, d))
            smallest = min(
                math.dist(means[i], means[j])
                for i in range(components)
                for j in range(i + 1, components)
            )
        if smallest < separation:
            means *= separation / smallest
    sizes = [n // components + (1 if i < n % components else 0) for i in range(components)]
    parts = [
        means[i] + rng.normal(size=(sizes[i], d)) for i in range(components) if sizes[i]
    ]
    return Dataset.from_points(np.vstack(parts))
