"""fluxfigs command line: render one figure from a directory of CSVs."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureSpec, RenderError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxfigs",
        description="Render solver-comparison figures from fvdiss CSV output")
    commands = parser.add_subparsers(dest="command", required=True)
    p = commands.add_parser("render", help="render one figure")
    p.add_argument("--fig", required=True, choices=FIGURE_IDS, help="figure id")
    p.add_argument("--in", dest="input_dir", required=True,
                   help="directory holding the CSV files")
    p.add_argument("--out", dest="output_path", required=True,
                   help="output image path (e.g. fig1.png)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(figure_id=args.fig, input_dir=args.input_dir,
                          output_path=args.output_path)
        count = render(spec)
    except RenderError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"{args.fig}: {count} curves -> {args.output_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
