"""
Services package for makerboard.

This package contains the business logic: graph and leveling construction,
the board, the discrepancy games, Maker's strategy, Breaker policies,
the oracles and the run harness.
"""

from .harness_service import build_instance, experiment, load_config, play, verify
from .maker_service import run_game

__all__ = ["build_instance", "experiment", "load_config", "play", "run_game", "verify"]
