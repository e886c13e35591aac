"""``report``: compare every campaign under a results directory."""

import argparse
from pathlib import Path

from wmm_lab.services.reporting import write_comparison


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("report", help="write comparison.csv across campaigns")
    parser.add_argument(
        "--out", type=Path, required=True, help="directory holding campaign sub-directories"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    write_comparison(args.out)
    return 0
