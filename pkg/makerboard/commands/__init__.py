"""
Commands package for makerboard.

This package contains the subcommands of the command-line interface.
"""

from .construction import register as register_construction
from .games import register as register_games
from .oracle import register as register_oracle

__all__ = ["register_construction", "register_games", "register_oracle"]
