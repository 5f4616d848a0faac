"""
Game commands: play, experiment and verify.
"""

import argparse
import logging
from pathlib import Path
from typing import TextIO

from makerboard.commands.common import add_game_options, config_from_args
from makerboard.models.board import Player
from makerboard.models.exceptions import EXIT_MAKER_LOST, EXIT_OK, ConfigError
from makerboard.services.harness_service import experiment, play, verify

logger = logging.getLogger(__name__)


def play_command(args: argparse.Namespace, out: TextIO) -> int:
    """
    Play one game and write its transcript.

    Returns:
        int: 0 when Maker wins, 2 otherwise
    """
    outcome = play(config_from_args(args), out)
    return EXIT_OK if outcome.winner == Player.MAKER else EXIT_MAKER_LOST


def experiment_command(args: argparse.Namespace, out: TextIO) -> int:
    """
    Run seeded games and print the aggregate report.

    Run records go to --output when given.

    Returns:
        int: 0 when no run was lost, 2 otherwise
    """
    cfg = config_from_args(args)
    report = experiment(cfg)
    out.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_MAKER_LOST if report.losses else EXIT_OK


def verify_command(args: argparse.Namespace, out: TextIO) -> int:
    """
    Replay a transcript and report the outcome.

    Returns:
        int: 0 when the replay matches; mismatches raise
    """
    try:
        text = Path(args.transcript).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read transcript {args.transcript}: {exc}") from exc
    outcome = verify(text)
    out.write(
        f"verified: {outcome.winner.value} wins ({outcome.reason}) after {outcome.rounds} rounds\n"
    )
    if outcome.embedding is not None:
        for v, image in enumerate(outcome.embedding):
            out.write(f"{v} -> {image}\n")
    return EXIT_OK


def register(subparsers: argparse._SubParsersAction) -> None:
    """
    Add the game subcommands.

    Args:
        subparsers: Subparser collection of the main parser
    """
    play_parser = subparsers.add_parser("play", help="play one game, print its transcript")
    add_game_options(play_parser)
    play_parser.set_defaults(handler=play_command)

    experiment_parser = subparsers.add_parser("experiment", help="play seeded games in bulk")
    add_game_options(experiment_parser)
    experiment_parser.add_argument("--repetitions", type=int)
    experiment_parser.add_argument("--workers", type=int)
    experiment_parser.set_defaults(handler=experiment_command)

    verify_parser = subparsers.add_parser("verify", help="replay and re-audit a transcript")
    verify_parser.add_argument("transcript")
    verify_parser.set_defaults(handler=verify_command)
