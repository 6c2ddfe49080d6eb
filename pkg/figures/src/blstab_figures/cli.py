"""Command-line interface for the figure renderer.

One subcommand:

    render --kind <k> --in <csv> --out <png>

where <k> is one of profile, sweep, spectrum, vorticity, eigenfunction.
Exit codes: 0 on success, 2 on a usage or input error (missing file,
schema mismatch, empty table).  Schema mismatches report the column diff
on stderr; no output file is written on failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, FigureSpec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="blstab-figures",
        description="Render figures from the stability toolkit's CSV outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure from one CSV")
    p_render.add_argument("--kind", required=True, choices=KINDS,
                          help="figure kind; fixes the expected CSV schema")
    p_render.add_argument("--in", dest="csv_path", required=True, type=Path,
                          metavar="CSV", help="input CSV path")
    p_render.add_argument("--out", dest="out_path", required=True, type=Path,
                          metavar="PNG", help="output image path")
    return parser


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    spec = FigureSpec(kind=ns.kind, csv_path=ns.csv_path, out_path=ns.out_path)
    try:
        out = render(spec)
    except (ValueError, OSError) as exc:
        # SchemaError is a ValueError; the message carries the column diff.
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    print("wrote %s" % (out,))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
