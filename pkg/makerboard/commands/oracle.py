"""
Oracle command: differential suites against the brute-force references.
"""

import argparse
from typing import TextIO

from makerboard.models.exceptions import EXIT_ERROR, EXIT_OK
from makerboard.services.oracle_service import run_suites


def oracle_command(args: argparse.Namespace, out: TextIO) -> int:
    """
    Run the chosen suites and print one JSON report per suite.

    Returns:
        int: 0 without disagreements, 1 otherwise
    """
    names = ["candidate", "engine"] if args.suite == "all" else [args.suite]
    reports = run_suites(names, args.seeds)
    for report in reports:
        out.write(report.model_dump_json() + "\n")
    return EXIT_ERROR if any(report.disagreements for report in reports) else EXIT_OK


def register(subparsers: argparse._SubParsersAction) -> None:
    """
    Add the oracle subcommand.

    Args:
        subparsers: Subparser collection of the main parser
    """
    parser = subparsers.add_parser("oracle", help="run the differential suites")
    parser.add_argument("--suite", choices=["candidate", "engine", "all"], default="all")
    parser.add_argument("--seeds", type=int, default=100)
    parser.set_defaults(handler=oracle_command)
