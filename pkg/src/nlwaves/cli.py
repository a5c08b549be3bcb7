"""Command-line entry point.

Verbs::

    nlwaves run <config.json | preset-name> [--out DIR]
    nlwaves list-presets
    nlwaves validate <config.json>
    nlwaves sweep "<config-glob>" [--out DIR]

Exit codes: 0 on success, 2 on configuration/validation failure, 3 when a
run aborts numerically (blow-up flag set).
"""

from __future__ import annotations

import argparse
import glob as globmod
import json
import sys
from pathlib import Path

from . import presets
from .config import ExperimentConfig, run, validate
from .grid import ConfigurationError, ConstraintViolation


def _load_config(source):
    """Resolve a config file path or preset name to an ExperimentConfig."""
    p = Path(source)
    if p.suffix == ".json" or p.exists():
        try:
            return ExperimentConfig.from_json(p.read_text())
        except FileNotFoundError:
            raise ConfigurationError(f"no such config file: {source}")
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise ConfigurationError(f"cannot parse {source}: {e}")
    try:
        return presets.get_preset(source)
    except KeyError as e:
        raise ConfigurationError(str(e))


def _run_one(config, out_root):
    problems = validate(config)
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        return 2
    out_dir = Path(out_root) / config.name
    result = run(config, out_dir)
    summary = json.loads((result / "summary.json").read_text())
    if summary.get("blowup"):
        b = summary["blowup"]
        print(
            f"{config.name}: aborted at t={b['time']:g} ({b['reason']}); "
            f"output in {result}"
        )
        return 3
    print(f"{config.name}: completed; output in {result}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="nlwaves", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="run one experiment config or preset")
    p_run.add_argument("source", help="config JSON path or preset name")
    p_run.add_argument("--out", default="runs", help="output root directory")

    sub.add_parser("list-presets", help="list available preset names")

    p_val = sub.add_parser("validate", help="check a config without running it")
    p_val.add_argument("source", help="config JSON path or preset name")

    p_sweep = sub.add_parser("sweep", help="run every config matching a glob")
    p_sweep.add_argument("pattern", help="glob over config JSON files")
    p_sweep.add_argument("--out", default="runs", help="output root directory")

    args = parser.parse_args(argv)

    if args.verb == "list-presets":
        for name, desc in presets.list_presets():
            print(f"{name:32s} {desc}")
        return 0

    try:
        if args.verb == "validate":
            config = _load_config(args.source)
            problems = validate(config)
            for p in problems:
                print(f"invalid: {p}", file=sys.stderr)
            if problems:
                return 2
            print(f"{config.name}: ok")
            return 0

        if args.verb == "run":
            config = _load_config(args.source)
            return _run_one(config, args.out)

        if args.verb == "sweep":
            paths = sorted(globmod.glob(args.pattern))
            if not paths:
                print(f"invalid: no configs match {args.pattern!r}", file=sys.stderr)
                return 2
            worst = 0
            for path in paths:
                config = _load_config(path)
                worst = max(worst, _run_one(config, args.out))
            return worst
    except (ConfigurationError, ConstraintViolation) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return 2

    return 0


if __name__ == "__main__":
    sys.exit(main())
