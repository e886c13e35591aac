"""
Command-line entry point.

    wmm-lab [--log-level LEVEL] gen-data|train|search|report [options]

Exit codes:
    0  success
    1  invalid spec, argument or configuration
    2  training diverged
    3  I/O error
"""

import argparse
import sys

from pydantic import ValidationError

from wmm_lab.commands import gen_data, report, search, train
from wmm_lab.core.errors import TrainingDivergedError
from wmm_lab.core.logging import logger
from wmm_lab.services.log_level_manager import initialize_runtime_log_level

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_DIVERGED = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wmm-lab",
        description="Weight-matrix-modification regularizers: data, training, search, reports.",
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (gen_data, train, search, report):
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        initialize_runtime_log_level(args.log_level)
        return args.handler(args)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or "<root>"
        logger.error("Invalid spec: field '%s': %s", field, first["msg"])
        return EXIT_INVALID
    except TrainingDivergedError as e:
        logger.error("%s", e)
        return EXIT_DIVERGED
    except OSError as e:
        logger.error("I/O error on %s: %s", e.filename or "<unknown>", e.strerror or e)
        return EXIT_IO
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
