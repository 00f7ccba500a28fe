"""Command-line entry: render the figure set for one CSV."""

from __future__ import annotations

import argparse
import sys

from .render import PANELS, ColumnError, FigureSpec, drive_parity, read_columns, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="mcfigures")
    sub = parser.add_subparsers(dest="command", required=True)
    render_p = sub.add_parser("render", help="render the figure set for one CSV")
    render_p.add_argument("--csv", required=True, help="simulation CSV path")
    render_p.add_argument("--preset", required=True, help="scenario name the CSV belongs to")
    render_p.add_argument("--out", required=True, help="output directory for PNG/SVG files")
    render_p.add_argument(
        "--panels", nargs="+", default=list(PANELS), choices=PANELS, help="panels to render"
    )
    args = parser.parse_args(argv)

    try:
        spec = FigureSpec(args.preset, args.csv, args.out, tuple(args.panels))
        written = render(spec)
        parity = drive_parity(read_columns(args.csv))
    except (ColumnError, OSError, ValueError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    print(f"drive parity (mean |u - (-F/G)| over last 2 s): {parity:.6g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
