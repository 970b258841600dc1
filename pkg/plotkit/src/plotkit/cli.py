"""Command-line entry points: ``plotkit heatmap`` and ``plotkit curves``."""

import argparse
import sys

from .render import EmptyData, SchemaError, render_curves, render_heatmap


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from noblesqueeze CSV artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    heat = sub.add_parser("heatmap", help="squeezing map with overlay crosses")
    heat.add_argument("map_csv")
    heat.add_argument("--points", help="working-point CSV to overlay")
    heat.add_argument("-o", "--out", required=True, help="output image path")
    heat.add_argument("--range", help="fixed color range MIN:MAX in dB")

    curves = sub.add_parser("curves", help="lifetime decay curves in dB")
    curves.add_argument("series_csv")
    curves.add_argument("-o", "--out", required=True, help="output image path")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "heatmap":
            value_range = None
            if args.range:
                lo, hi = args.range.split(":")
                value_range = (float(lo), float(hi))
            render_heatmap(args.map_csv, args.out, points_csv=args.points,
                           value_range=value_range)
        else:
            render_curves(args.series_csv, args.out)
    except (SchemaError, EmptyData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
