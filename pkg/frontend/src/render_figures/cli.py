"""Command-line entry point.

    render-figures --kind <kind> --in <csv> --out <image> [--png]

Kinds: subcycle, waveform, eo_scan, order_compare, dispersion.  Output is
SVG by default; --png switches the raster backend (the output extension
must match).  Exit codes: 0 success, 2 on any input or rendering error.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, render
from .reader import RenderError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render-figures",
        description="Render publication-style figures from scan CSVs.")
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="csv_path", required=True,
                        help="input scan CSV")
    parser.add_argument("--out", dest="out_path", required=True,
                        help="output image path (.svg, or .png with --png)")
    parser.add_argument("--png", action="store_true",
                        help="write PNG instead of SVG")
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    suffix = args.out_path.lower().rsplit(".", 1)[-1]
    expected = "png" if args.png else "svg"
    if suffix != expected:
        print(f"output extension .{suffix} does not match --{'png' if args.png else 'svg default'}"
              f" (expected .{expected})", file=sys.stderr)
        return 2
    try:
        spec = FigureSpec(kind=args.kind, csv_path=args.csv_path,
                          out_path=args.out_path, xlabel=args.xlabel,
                          ylabel=args.ylabel)
        render(spec)
    except RenderError as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
