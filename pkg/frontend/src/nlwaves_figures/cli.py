"""Command-line entry point: render figures from run directories.

Usage::

    nlwaves-figures render <run-dir> --kind <waterfall|heatmap|fit_overlay|
                                             decay_loglog|difference>
                                     [--snapshot N] [--out PATH]

Exit codes: 0 on success, 1 when the run directory is unreadable, a listed
snapshot is missing, or the requested figure cannot be produced.  Run
directories are never modified.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, RenderError, render
from .runs import RunFormatError, load_run


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="nlwaves-figures", description=__doc__.splitlines()[0]
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("render", help="render one figure from a run directory")
    p.add_argument("run_dir", help="finished run directory")
    p.add_argument("--kind", required=True, choices=sorted(KINDS))
    p.add_argument(
        "--snapshot",
        type=int,
        default=-1,
        help="snapshot index for single-snapshot kinds (default: last)",
    )
    p.add_argument("--out", default=None, help="output image path (default: PNG "
                   "named after the run and kind, in the working directory)")
    args = parser.parse_args(argv)

    try:
        run = load_run(args.run_dir)
    except (RunFormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    out = Path(args.out) if args.out else Path(f"{run.name}_{args.kind}.png")
    try:
        render(run, args.kind, out, snapshot_index=args.snapshot)
    except RenderError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
