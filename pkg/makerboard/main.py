"""
makerboard command-line application.

This module builds the argument parser from the command packages, sets up
logging and maps package errors to exit codes.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional, TextIO

from dotenv import load_dotenv

from makerboard.commands import register_construction, register_games, register_oracle
from makerboard.models.exceptions import EXIT_ERROR, MakerBoardError

logger = logging.getLogger("makerboard")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    """
    Create the top-level parser with every subcommand.

    Returns:
        argparse.ArgumentParser: The configured parser
    """
    parser = argparse.ArgumentParser(
        prog="makerboard",
        description="Maker-Breaker G-game simulator on blown-up star boards",
    )
    parser.add_argument(
        "--log-level",
        dest="log_level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="log level (default from MAKERBOARD_LOG_LEVEL, else WARNING)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Add construction commands
    register_construction(subparsers)

    # Add game commands
    register_games(subparsers)

    # Add the differential oracle
    register_oracle(subparsers)
    return parser


def configure_logging(level: Optional[str]) -> None:
    """
    Send log records to stderr at the requested level.

    Args:
        level: Level name, falling back to MAKERBOARD_LOG_LEVEL
    """
    name = (level or os.getenv("MAKERBOARD_LOG_LEVEL") or "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )


def cli(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name, sys.argv when omitted
        out: Stream for command output, stdout when omitted

    Returns:
        int: Process exit code
    """
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    out = out if out is not None else sys.stdout
    try:
        return args.handler(args, out)
    except MakerBoardError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.detail)
        sys.stderr.write(f"error: {exc.detail}\n")
        return exc.exit_code
    except KeyboardInterrupt:
        sys.stderr.write("interrupted\n")
        return EXIT_ERROR


def main() -> None:
    """
    Console entry point: run the command line and exit with its code.

    Raises:
        SystemExit: Always, carrying the exit code of cli
    """
    sys.exit(cli())
