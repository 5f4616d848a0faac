"""
Acceptance sweeps over seeded instances.

The default run uses reduced repetition counts; the full sweeps carry the
slow marker.
"""

import numpy as np
import pytest

from makerboard.models.board import Player
from makerboard.services.blocking_service import build_blocking_dag, check_dag_bounds
from makerboard.services.board_service import block_parameter, build_board_spec, edge_count
from makerboard.services.breaker_service import (
    GreedyHypergraphBreaker,
    RandomHypergraphBreaker,
    make_policy,
)
from makerboard.services.discrepancy_service import HypergraphGame, play_hypergraph_game, quota
from makerboard.services.graph_service import gen_random_regular, named_graph
from makerboard.services.leveling_service import level_greedy, level_lll, validate_leveling
from makerboard.services.maker_service import check_s_guarantee, run_game

AUTOMATED_BREAKERS = ["random", "greedy_subgame", "scatter", "scripted"]


def target_graphs(count):
    """Named graphs followed by seeded random regular graphs of degree 2 and 3."""
    graphs = [named_graph("c4"), named_graph("c6"), named_graph("petersen")]
    for seed in range(count):
        d = 2 + seed % 2
        n = 6 + 2 * (seed % 28)
        graphs.append(gen_random_regular(n, d, seed))
    return graphs


def random_game(seed):
    """Seeded hypergraph with at most 64 hyperedges on at most 200 vertices."""
    rng = np.random.default_rng(seed)
    vertex_count = int(rng.integers(20, 201))
    hyperedges = int(rng.integers(1, 65))
    density = float(rng.uniform(0.3, 0.8))
    return HypergraphGame(vertex_count, rng.random((hyperedges, vertex_count)) < density)


def maker_claims(events):
    """Maker's claimed edges as written in the event records."""
    return {event.edge for event in events if event.player == Player.MAKER and event.edge}


def check_embedding(g, outcome, events):
    """Every edge of g maps onto an edge Maker claimed."""
    claimed = maker_claims(events)
    images = outcome.embedding
    assert len(set(images)) == g.n
    for u, v in g.edges():
        assert f"{images[u]} {images[v]}" in claimed or f"{images[v]} {images[u]}" in claimed


def play_guaranteed(name, s, kind, seed):
    """Play one game on a named graph against an automated Breaker."""
    g = named_graph(name)
    l = level_greedy(g)
    dag = build_blocking_dag(g, l)
    spec = build_board_spec(g, l, dag, s)
    events = []
    outcome = run_game(g, l, dag, spec, make_policy(kind, seed=seed), recorder=events.append)
    return g, outcome, events


class TestConstructionSweep:
    """
    Levelings, blocking graphs and boards over seeded instances.
    """

    @pytest.mark.parametrize("count", [pytest.param(20), pytest.param(200, marks=pytest.mark.slow)])
    def test_levelings_valid(self, count):
        """
        Test that both leveling algorithms leave no same-level pair within distance 2.
        """
        for seed, g in enumerate(target_graphs(count)):
            assert validate_leveling(g, level_greedy(g)) == []
            assert validate_leveling(g, level_lll(g, seed)) == []

    def test_blocking_bounds(self):
        """
        Test out-degrees and level-decreasing arcs.
        """
        for g in target_graphs(20):
            l = level_greedy(g)
            dag = build_blocking_dag(g, l)
            report = check_dag_bounds(dag, g, l)

            assert report.passed
            assert report.max_out_degree <= g.d * g.d
            assert all(l.levels[u] < l.levels[v] for v, out in enumerate(dag.arcs) for u in out)

    def test_edge_count_within_bound(self):
        """
        Test the exact edge count against the displayed bound.
        """
        for g in target_graphs(20):
            l = level_greedy(g)
            spec = build_board_spec(g, l, build_blocking_dag(g, l), 4)

            assert edge_count(spec, g, l.r).within_bound

    def test_guarantee_thresholds(self):
        """
        Test the guarantee inequality at its reference points.
        """
        assert check_s_guarantee(2, 128)
        assert not check_s_guarantee(2, 64)
        assert check_s_guarantee(2, 2048)
        assert check_s_guarantee(3, block_parameter(3))


class TestQuotaSweep:
    """
    The engine against random and greedy Breakers in both move orders.
    """

    @pytest.mark.parametrize("maker_first", [True, False])
    @pytest.mark.parametrize("count", [pytest.param(20), pytest.param(500, marks=pytest.mark.slow)])
    def test_quota(self, count, maker_first):
        """
        Test that every hyperedge ends at or above the quota.
        """
        for seed in range(count):
            for breaker in (RandomHypergraphBreaker(seed), GreedyHypergraphBreaker()):
                game = random_game(seed)

                counts = play_hypergraph_game(game, breaker, maker_first=maker_first)

                assert counts.min() >= quota(game.x, game.X), seed


class TestGuaranteeGames:
    """
    Games at the guarantee value of s.
    """

    @pytest.mark.integration
    @pytest.mark.parametrize("kind", AUTOMATED_BREAKERS)
    def test_single_edge(self, kind):
        """
        Test that Maker wins on one edge against every automated Breaker.
        """
        for seed in range(2):
            g, outcome, events = play_guaranteed("k2", 32, kind, seed)

            assert outcome.winner == Player.MAKER
            assert outcome.scheme_verified is True
            assert outcome.invariant_violations == 0
            check_embedding(g, outcome, events)

    @pytest.mark.slow
    @pytest.mark.integration
    @pytest.mark.parametrize("kind", AUTOMATED_BREAKERS)
    def test_single_edge_full(self, kind):
        """
        Test 25 seeds per Breaker on one edge.
        """
        for seed in range(25):
            g, outcome, events = play_guaranteed("k2", 32, kind, seed)

            assert outcome.winner == Player.MAKER
            check_embedding(g, outcome, events)

    @pytest.mark.integration
    @pytest.mark.parametrize("kind", AUTOMATED_BREAKERS)
    @pytest.mark.parametrize(
        "name, count",
        [
            pytest.param("c6", 1),
            pytest.param("c12", 1),
            pytest.param("c6", 25, marks=pytest.mark.slow),
            pytest.param("c12", 25, marks=pytest.mark.slow),
        ],
    )
    def test_cycles(self, name, count, kind):
        """
        Test cycles at s = 128 with the scheme, reserve and length audits.
        """
        for seed in range(count):
            g, outcome, events = play_guaranteed(name, 128, kind, seed)

            assert outcome.winner == Player.MAKER, seed
            assert outcome.guarantee is True
            assert outcome.scheme_verified is True
            assert outcome.invariant_violations == 0
            assert outcome.attribution_violations == 0
            assert outcome.length_violations == 0
            assert all(entry.touched <= entry.touched_bound for entry in outcome.audit)
            check_embedding(g, outcome, events)


class TestPetersenSweep:
    """
    The Petersen graph at s = 64, below the guarantee value of s.

    Maker is not promised a win here; the reserve and attribution audits
    must hold in every run regardless of the result.
    """

    @pytest.mark.integration
    @pytest.mark.parametrize("count", [pytest.param(3), pytest.param(100, marks=pytest.mark.slow)])
    def test_audits(self, count):
        """
        Test the untouched-reserve and attribution audits over seeded runs.
        """
        for seed in range(count):
            kind = AUTOMATED_BREAKERS[seed % len(AUTOMATED_BREAKERS)]

            g, outcome, events = play_guaranteed("petersen", 64, kind, seed)

            assert outcome.guarantee is False
            assert outcome.invariant_violations == 0, seed
            assert outcome.attribution_violations == 0, seed
            assert outcome.length_violations == 0, seed
            assert all(entry.touched <= entry.touched_bound for entry in outcome.audit)
            if outcome.winner == Player.MAKER:
                check_embedding(g, outcome, events)
