"""
Shared command-line options.

This module declares the flags every game command accepts and turns the
parsed namespace into a RunConfig (flags win over the config file).
"""

import argparse
from typing import Any, Dict

from makerboard.models.game import RunConfig
from makerboard.services.harness_service import load_config

# Flag destinations that map one to one onto RunConfig fields.
CONFIG_FIELDS = (
    "graph",
    "leveling",
    "leveling_seed",
    "leveling_file",
    "s",
    "breaker",
    "seed",
    "script",
    "repetitions",
    "round_cap",
    "maker_first",
    "workers",
    "output",
)


def add_instance_options(parser: argparse.ArgumentParser) -> None:
    """
    Options selecting graph, leveling and board.

    Args:
        parser: Subcommand parser
    """
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--graph", help="c{n}, e{n}, petersen, k4, k2, random:n:d:seed, file:path")
    parser.add_argument("--leveling", choices=["greedy", "lll"])
    parser.add_argument("--leveling-seed", dest="leveling_seed", type=int)
    parser.add_argument(
        "--leveling-file",
        dest="leveling_file",
        help="file of 'vertex level' lines, as printed by label",
    )
    parser.add_argument("--s", help="formula, guarantee or a positive integer")


def add_game_options(parser: argparse.ArgumentParser) -> None:
    """
    Options of the game commands on top of the instance options.

    Args:
        parser: Subcommand parser
    """
    add_instance_options(parser)
    parser.add_argument(
        "--breaker",
        choices=["random", "greedy_subgame", "scatter", "scripted", "interactive"],
    )
    parser.add_argument("--seed", type=int)
    parser.add_argument("--script", help="move script for the scripted Breaker")
    parser.add_argument("--round-cap", dest="round_cap", type=int)
    parser.add_argument(
        "--maker-first", dest="maker_first", action="store_const", const=True, default=None
    )
    parser.add_argument("--output", help="transcript or run-record file")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    Build the run configuration of a parsed command line.

    Args:
        args: Parsed arguments

    Returns:
        RunConfig: Config file values overridden by the given flags
    """
    overrides: Dict[str, Any] = {
        field: getattr(args, field) for field in CONFIG_FIELDS if hasattr(args, field)
    }
    return load_config(getattr(args, "config", None), overrides)
