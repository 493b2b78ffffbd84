"""Command line: figures <kind> <input.csv> <output image>."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureDataError, FigureJob, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render a figure from hoaxnet experiment CSV output.",
    )
    parser.add_argument("kind", choices=KINDS, metavar="kind",
                        help="one of: " + ", ".join(KINDS))
    parser.add_argument("input_csv", help="experiment CSV to plot")
    parser.add_argument("output_image", help="image path (.pdf/.svg vector, .png raster)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        render(FigureJob(args.kind, args.input_csv, args.output_image))
    except (FigureDataError, OSError) as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    sys.exit(main())
