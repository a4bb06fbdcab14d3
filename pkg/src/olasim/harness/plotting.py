"""Deterministic SVG charts from aggregate CSVs: one for cumulative queries,
one for cumulative regret, one line per learner with standard-error bands."""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from ..errors import ConfigurationError
from .runner import AGGREGATE_COLUMNS

# Fixed hash salt plus stripped date metadata keep SVG bytes identical across
# invocations on the same library versions.
matplotlib.rcParams["svg.hashsalt"] = "olasim"

_METRICS = (("mean_Q", "se_Q", "cumulative queries Q(t)", "queries.svg"),
            ("mean_R", "se_R", "cumulative regret R(t)", "regret.svg"))


def emit_plot(in_dir: str | Path, out_dir: str | Path | None = None) -> list[Path]:
    """Render charts for the aggregate CSV in ``in_dir``; returns the written
    paths."""
    in_path = Path(in_dir)
    csv_path = in_path / "aggregate.csv" if in_path.is_dir() else in_path
    if not csv_path.is_file():
        raise ConfigurationError(f"no aggregate CSV at {csv_path}")
    out_root = Path(out_dir) if out_dir is not None else csv_path.parent

    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in AGGREGATE_COLUMNS if c not in header]
        if missing:
            raise ConfigurationError(
                f"aggregate CSV {csv_path} is missing column(s): {', '.join(missing)}"
            )
        rows = list(reader)
    if not rows:
        raise ConfigurationError(f"aggregate CSV {csv_path} holds no data rows")

    series: dict[str, list[dict]] = defaultdict(list)
    for row in rows:
        series[row["learner"]].append(row)

    out_root.mkdir(parents=True, exist_ok=True)
    written = []
    for mean_col, se_col, title, fname in _METRICS:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for learner in sorted(series):
            pts = series[learner]
            t = [int(p["t"]) for p in pts]
            mean = [float(p[mean_col]) for p in pts]
            se = [float(p[se_col]) for p in pts]
            ax.plot(t, mean, label=learner)
            lo = [m - s for m, s in zip(mean, se)]
            hi = [m + s for m, s in zip(mean, se)]
            ax.fill_between(t, lo, hi, alpha=0.2, linewidth=0)
        ax.set_xscale("log")
        ax.set_xlabel("t")
        ax.set_ylabel(title)
        ax.legend()
        fig.tight_layout()
        path = out_root / fname
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)
    return written
