"""Log-log decay plots from trajectory CSV files.

Consumes only the documented CSV schema (header row naming columns like
``t``, ``s=1``, ``besov_nu=-1``; one float row per snapshot) and never
mutates its inputs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

matplotlib.rcParams["svg.hashsalt"] = "muskat-plots"  # deterministic SVG ids


class PlotError(Exception):
    """Bad plot request: missing columns, empty input, no data."""


@dataclass
class PlotSpec:
    """What to draw: input CSVs, columns, reference slopes, output path."""

    csv_paths: list[str]
    columns: list[str]
    ref_slopes: list[float] = field(default_factory=list)
    out_path: str = "decay.png"
    title: str = ""
    t_column: str = "t"


def read_table(path: str) -> dict[str, np.ndarray]:
    """Read a header+floats CSV into named columns."""
    with open(path) as fh:
        header_line = fh.readline().strip()
        if not header_line:
            raise PlotError(f"empty CSV: {path}")
        header = [c.strip() for c in header_line.split(",")]
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as err:
            raise PlotError(f"unparseable CSV {path}: {err}") from None
    if data.size == 0:
        raise PlotError(f"CSV has a header but no rows: {path}")
    if data.shape[1] != len(header):
        raise PlotError(f"CSV {path}: {data.shape[1]} columns but {len(header)} header names")
    return {name: data[:, i] for i, name in enumerate(header)}


@dataclass
class RenderResult:
    out_path: str
    series_drawn: int
    dropped_points: int


def render_decay(spec: PlotSpec) -> RenderResult:
    """Draw the selected norm series against (1+t) on log-log axes.

    Missing columns raise :class:`PlotError` listing them by name before
    any file is written; nonpositive values are dropped (they cannot sit
    on a log axis) and counted in the result.  Reference power laws are
    drawn dashed, anchored at the first plotted point.
    """
    if not spec.csv_paths:
        raise PlotError("no input CSV given")
    if not spec.columns:
        raise PlotError("no columns selected")
    tables = {}
    missing: list[str] = []
    for path in spec.csv_paths:
        table = read_table(path)
        if spec.t_column not in table:
            missing.append(f"{path}:{spec.t_column}")
        for col in spec.columns:
            if col not in table:
                missing.append(f"{path}:{col}")
        tables[path] = table
    if missing:
        raise PlotError("missing columns: " + ", ".join(missing))

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    dropped = 0
    drawn = 0
    anchor = None
    multi = len(spec.csv_paths) > 1
    for path, table in tables.items():
        shifted_t = 1.0 + table[spec.t_column]
        stem = os.path.splitext(os.path.basename(path))[0]
        for col in spec.columns:
            vals = table[col]
            keep = vals > 0
            dropped += int(np.sum(~keep))
            if not np.any(keep):
                continue
            label = f"{stem}:{col}" if multi else col
            ax.loglog(shifted_t[keep], vals[keep], label=label)
            drawn += 1
            if anchor is None:
                anchor = (shifted_t[keep][0], vals[keep][0])
    if drawn == 0:
        plt.close(fig)
        raise PlotError("no positive data to draw")
    t_all = np.concatenate([1.0 + tbl[spec.t_column] for tbl in tables.values()])
    t_line = np.geomspace(t_all.min(), t_all.max(), 64)
    for slope in spec.ref_slopes:
        y = anchor[1] * (t_line / anchor[0]) ** slope
        ax.loglog(t_line, y, "--", linewidth=1.0, label=f"ref slope {slope:g}")
    ax.set_xlabel("1 + t")
    ax.set_ylabel("norm")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.out_path, metadata=_stable_metadata(spec.out_path))
    plt.close(fig)
    return RenderResult(out_path=spec.out_path, series_drawn=drawn, dropped_points=dropped)


def _stable_metadata(out_path: str):
    # keep SVG output byte-stable across runs
    if out_path.endswith(".svg"):
        return {"Date": None}
    return None
