"""Tiny CLI: qdlab-plot KIND INPUT.csv OUTPUT.{png,svg}"""

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, render


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="qdlab-plot",
        description="Render a qdlab result CSV into a static figure.")
    parser.add_argument("kind", choices=sorted(FIGURE_KINDS))
    parser.add_argument("input", help="qdlab CSV result file")
    parser.add_argument("output", help="image path (.png or .svg)")
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)
    try:
        out = render(FigureSpec((args.input,), args.kind, args.output,
                                title=args.title))
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
