"""
Tests for the brute-force oracles and the differential suites.
"""

import pytest

from makerboard.models.board import Player
from makerboard.models.exceptions import OracleCapExceeded
from makerboard.services.discrepancy_service import HypergraphGame, play_hypergraph_game
from makerboard.services.oracle_service import (
    HypergraphSolver,
    OptimalHypergraphBreaker,
    candidate_suite,
    engine_suite,
    minimax_hypergraph,
    random_candidate_position,
    random_hypergraph,
    run_suites,
)


class TestMinimax:
    """
    Unit tests for the exhaustive solver.
    """

    def test_single_hyperedge(self):
        """
        Test the even split of one hyperedge in both move orders.
        """
        assert minimax_hypergraph(HypergraphGame(4, [range(4)]), Player.MAKER) == (2,)
        assert minimax_hypergraph(HypergraphGame(4, [range(4)]), Player.BREAKER) == (2,)
        assert minimax_hypergraph(HypergraphGame(3, [range(3)]), Player.MAKER) == (2,)
        assert minimax_hypergraph(HypergraphGame(3, [range(3)]), Player.BREAKER) == (1,)

    def test_value_from_current_position(self):
        """
        Test that claims already made are part of the value.
        """
        game = HypergraphGame(4, [[0, 1], [2, 3]])
        game.claim(0, Player.BREAKER)
        game.claim(1, Player.BREAKER)

        assert minimax_hypergraph(game, Player.MAKER) == (0, 1)

    def test_vertex_cap(self):
        """
        Test that large games are refused.
        """
        with pytest.raises(OracleCapExceeded):
            minimax_hypergraph(HypergraphGame(15, [range(15)]), Player.MAKER)

    def test_optimal_breaker_holds_engine_to_value(self):
        """
        Test the engine against the optimal Breaker on two overlapping hyperedges.
        """
        template = HypergraphGame(5, [[0, 1, 2], [2, 3, 4]])
        solver = HypergraphSolver(template)
        game = HypergraphGame(5, template.incidence)

        counts = play_hypergraph_game(game, OptimalHypergraphBreaker(solver), maker_first=True)

        assert tuple(sorted(counts.tolist())) <= solver.value(0, 0, True)


class TestGenerators:
    """
    Unit tests for the random instances.
    """

    def test_random_hypergraph(self):
        """
        Test size limits and determinism.
        """
        game = random_hypergraph(4, max_vertices=6, max_hyperedges=3)

        assert 2 <= game.vertex_count <= 6
        assert 1 <= game.X <= 3
        assert game.x >= 1
        assert (random_hypergraph(4, 6, 3).incidence == game.incidence).all()

    def test_random_candidate_position(self):
        """
        Test that every B set is fixed with s members.
        """
        pos = random_candidate_position(1)

        assert all(len(pos.B[v]) == pos.spec.s for v in range(pos.graph.n))
        assert 2 <= pos.spec.s <= 4


class TestSuites:
    """
    Differential suites: the optimized code against the references.
    """

    @pytest.mark.integration
    @pytest.mark.parametrize("count", [pytest.param(8), pytest.param(500, marks=pytest.mark.slow)])
    def test_candidate_suite(self, count):
        """
        Test that the checker agrees with enumeration on random positions.
        """
        report = candidate_suite(range(count))

        assert report.suite == "candidate"
        assert report.instances == count
        assert report.checks > 0
        assert report.disagreements == 0, report.details

    @pytest.mark.integration
    def test_engine_suite(self):
        """
        Test the engine sandwich between quota and optimum.
        """
        report = engine_suite(range(10), max_vertices=8)

        assert report.instances == 10
        assert report.checks == 40
        assert report.disagreements == 0, report.details

    @pytest.mark.slow
    def test_run_suites(self):
        """
        Test running both suites by name.
        """
        reports = run_suites(["candidate", "engine"], 20)

        assert [report.suite for report in reports] == ["candidate", "engine"]
        assert all(report.disagreements == 0 for report in reports)
