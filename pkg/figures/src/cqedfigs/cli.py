"""Batch figure rendering: cqedfigs FIGURE --in key=path ... --out image.png"""

from __future__ import annotations

import argparse
import sys

from .render import FIGURES, FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cqedfigs")
    parser.add_argument("figure", choices=sorted(FIGURES))
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="KEY=PATH", help="input CSV for one curve (repeatable)")
    parser.add_argument("--out", required=True, help="output image (png or svg)")
    args = parser.parse_args(argv)
    inputs = {}
    for item in args.inputs:
        key, sep, path = item.partition("=")
        if not sep:
            print(f"error: --in expects KEY=PATH, got {item!r}", file=sys.stderr)
            return 2
        inputs[key.strip()] = path.strip()
    try:
        out = render(FigureSpec(figure=args.figure, inputs=inputs, output=args.out))
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
