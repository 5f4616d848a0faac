"""
Unit tests for the blocking graph.
"""

import math

import pytest

from makerboard.models.exceptions import LevelingError
from makerboard.models.graph import Leveling
from makerboard.services.blocking_service import ball_sizes, build_blocking_dag, check_dag_bounds
from makerboard.services.graph_service import gen_empty, named_graph
from makerboard.services.leveling_service import level_greedy


class TestBlockingDag:
    """
    Unit tests for build_blocking_dag and its bounds.
    """

    def test_cycle_arcs(self, c6_dag):
        """
        Test the arcs of the six-cycle.
        """
        assert c6_dag.arcs == ((), (0,), (1, 3, 4), (), (3,), (0, 1, 4))
        assert sum(c6_dag.out_degree(v) for v in range(6)) == 8
        assert c6_dag.arcs_text().splitlines()[0] == "1 0"

    def test_cycle_descendants(self, c6_dag):
        """
        Test the descendant sets of the six-cycle.
        """
        assert c6_dag.descendant_set(2) == frozenset({0, 1, 3, 4})
        assert c6_dag.descendant_set(5) == frozenset({0, 1, 3, 4})
        assert c6_dag.descendant_set(1) == frozenset({0})
        assert c6_dag.descendant_count(0) == 0
        assert c6_dag.predecessors(0) == [1, 5]

    def test_cycle_bounds(self, c6, c6_leveling, c6_dag):
        """
        Test the bounds report of the six-cycle.
        """
        report = check_dag_bounds(c6_dag, c6, c6_leveling)

        assert report.max_out_degree == 3
        assert report.max_descendants == 4
        assert report.out_degree_bound == 4
        assert report.descendant_bound_log10 == pytest.approx(math.log10(64))
        assert report.passed is True
        assert ball_sizes(c6) == [4] * 6

    def test_arcs_point_down(self):
        """
        Test that every arc of the Petersen graph goes to a lower level.
        """
        g = named_graph("petersen")
        l = level_greedy(g)
        dag = build_blocking_dag(g, l)

        for v, out in enumerate(dag.arcs):
            assert all(l.level(u) < l.level(v) for u in out)
        assert check_dag_bounds(dag, g, l).passed is True

    def test_edgeless_graph(self):
        """
        Test that an edgeless graph has no arcs.
        """
        g = gen_empty(3)
        dag = build_blocking_dag(g, level_greedy(g))

        assert dag.arcs == ((), (), ())
        assert dag.descendants == (0, 0, 0)

    def test_invalid_leveling_rejected(self, c6):
        """
        Test that the DAG is only built on a valid leveling.
        """
        with pytest.raises(LevelingError):
            build_blocking_dag(c6, Leveling(levels=(1, 1, 2, 3, 2, 3), r=3))
