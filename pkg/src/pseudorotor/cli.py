"""Command-line entry point: ``pseudorotor <experiment> [--config F] [--out D] [--override k=v ...]``."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .experiments import EXPERIMENTS, ConfigError, load_config, run_experiment
from .model import ParameterError, WindowError
from .pseudo import BranchCapError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_WINDOW = 3
EXIT_BRANCH_CAP = 4
EXIT_VERIFY = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudorotor", description=__doc__)
    parser.add_argument("--version", action="version", version=f"pseudorotor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list the named experiments")
    for name, anchor in EXPERIMENTS.items():
        p = sub.add_parser(name, help=anchor)
        p.add_argument("--config", help="INI-style config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config value (repeatable)")
    return parser


def _print_table(columns, rows) -> None:
    print("  ".join(columns))
    for row in rows:
        print("  ".join(f"{v:.6g}" if isinstance(v, float) else str(v) for v in row))


def main(argv: list[str] | None = None) -> int:
    # argparse exits with 2 on usage errors, which is also the config error code
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, anchor in EXPERIMENTS.items():
            print(f"{name:18s} {anchor}")
        return EXIT_OK
    try:
        cfg = load_config(args.command, args.config, args.override, args.out)
        result = run_experiment(cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WindowError as exc:
        print(f"window error: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except BranchCapError as exc:
        print(f"branch cap error: {exc}", file=sys.stderr)
        return EXIT_BRANCH_CAP
    _print_table(result.summary_columns, result.summary)
    for path in result.files:
        print(f"wrote {path}")
    if not result.ok:
        print(f"{args.command}: verification failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
