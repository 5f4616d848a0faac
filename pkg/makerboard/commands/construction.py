"""
Construction commands: label, dag and board.

These commands build the pieces of the board for a configuration and
print them without playing.
"""

import argparse
from typing import TextIO

from makerboard.models.exceptions import EXIT_ERROR, EXIT_OK
from makerboard.commands.common import add_instance_options, config_from_args
from makerboard.services.blocking_service import build_blocking_dag, check_dag_bounds
from makerboard.services.board_service import board_summary
from makerboard.services.graph_service import resolve_graph
from makerboard.services.harness_service import build_instance, build_leveling
from makerboard.services.leveling_service import lll_condition, validate_leveling


def label_command(args: argparse.Namespace, out: TextIO) -> int:
    """
    Print the leveling as "vertex level" lines followed by its validation.

    Returns:
        int: 0 for a valid leveling, 1 otherwise
    """
    cfg = config_from_args(args)
    g = resolve_graph(cfg.graph)
    l = build_leveling(g, cfg)
    out.write(l.to_text())
    violations = validate_leveling(g, l)
    for u, v in violations:
        out.write(f"# violation {u} {v}\n")
    if cfg.leveling == "lll" and cfg.leveling_file is None:
        condition = lll_condition(max(g.d, 1), l.r)
        out.write(f"# lll {condition.model_dump_json()}\n")
    out.write(f"# r={l.r} valid={not violations}\n")
    return EXIT_OK if not violations else EXIT_ERROR


def dag_command(args: argparse.Namespace, out: TextIO) -> int:
    """
    Print the arcs of the blocking graph as "v u" lines and its bounds report.

    Returns:
        int: 0 when every bound holds, 1 otherwise
    """
    cfg = config_from_args(args)
    g = resolve_graph(cfg.graph)
    l = build_leveling(g, cfg)
    dag = build_blocking_dag(g, l)
    report = check_dag_bounds(dag, g, l)
    out.write(dag.arcs_text())
    out.write(f"# {report.model_dump_json()}\n")
    return EXIT_OK if report.passed else EXIT_ERROR


def board_command(args: argparse.Namespace, out: TextIO) -> int:
    """
    Print the board summary as JSON.

    Returns:
        int: 0 when the exact edge count is within the bound, 1 otherwise
    """
    cfg = config_from_args(args)
    instance = build_instance(cfg)
    summary = board_summary(instance.graph, instance.leveling, instance.spec)
    out.write(summary.model_dump_json(indent=2) + "\n")
    return EXIT_OK if summary.within_bound else EXIT_ERROR


def register(subparsers: argparse._SubParsersAction) -> None:
    """
    Add the construction subcommands.

    Args:
        subparsers: Subparser collection of the main parser
    """
    label = subparsers.add_parser("label", help="emit a leveling and its validation")
    add_instance_options(label)
    label.set_defaults(handler=label_command)

    dag = subparsers.add_parser("dag", help="emit the blocking graph and its bounds")
    add_instance_options(dag)
    dag.set_defaults(handler=dag_command)

    board = subparsers.add_parser("board", help="emit block sizes and edge counts")
    add_instance_options(board)
    board.set_defaults(handler=board_command)
