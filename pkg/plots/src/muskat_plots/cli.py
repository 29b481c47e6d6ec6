"""Standalone plotting entry point.

Usage: plot-decay --csv trajectory.csv --cols s=1,s=2 --ref -3,-4 --out decay.svg
Exit codes: 0 ok, 2 bad arguments or missing columns.
"""

from __future__ import annotations

import argparse
import sys

from .render import PlotError, PlotSpec, render_decay


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot-decay", description=__doc__)
    parser.add_argument("--csv", action="append", required=True,
                        help="trajectory CSV (repeatable to overlay files)")
    parser.add_argument("--cols", required=True,
                        help="comma-separated column names, e.g. s=1,s=2")
    parser.add_argument("--ref", default="",
                        help="comma-separated reference slopes, e.g. -3,-4")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default="")
    parser.add_argument("--t-col", default="t")
    args = parser.parse_args(argv)

    spec = PlotSpec(
        csv_paths=args.csv,
        columns=[c.strip() for c in args.cols.split(",") if c.strip()],
        ref_slopes=[float(r) for r in args.ref.split(",") if r.strip()],
        out_path=args.out,
        title=args.title,
        t_column=args.t_col,
    )
    try:
        result = render_decay(spec)
    except (PlotError, OSError) as err:
        print(f"plot-decay: {err}", file=sys.stderr)
        return 2
    if result.dropped_points:
        print(f"plot-decay: dropped {result.dropped_points} nonpositive points", file=sys.stderr)
    print(f"wrote {result.out_path} ({result.series_drawn} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
