"""
Shared fixtures for the makerboard tests.

The six-cycle with its greedy leveling is the running example: levels
(1, 2, 3, 1, 2, 3), eight blocking arcs and blocks (4, 36, 132, 4, 36, 132)
at s = 4.
"""

import pytest

from makerboard.services.blocking_service import build_blocking_dag
from makerboard.services.board_service import build_board_spec
from makerboard.services.graph_service import gen_cycle, named_graph
from makerboard.services.leveling_service import level_greedy


@pytest.fixture
def c6():
    """Six-cycle."""
    return gen_cycle(6)


@pytest.fixture
def c6_leveling(c6):
    """Greedy leveling of the six-cycle."""
    return level_greedy(c6)


@pytest.fixture
def c6_dag(c6, c6_leveling):
    """Blocking graph of the six-cycle."""
    return build_blocking_dag(c6, c6_leveling)


@pytest.fixture
def c6_spec(c6, c6_leveling, c6_dag):
    """Board of the six-cycle at s = 4."""
    return build_board_spec(c6, c6_leveling, c6_dag, 4)


@pytest.fixture
def k2_instance():
    """Single edge with its leveling, blocking graph and board at s = 2."""
    g = named_graph("k2")
    l = level_greedy(g)
    dag = build_blocking_dag(g, l)
    return g, l, dag, build_board_spec(g, l, dag, 2)
