"""
Oracle service.

Slow, obviously correct references for the fast code paths: exhaustive
minimax over small hypergraph games and candidate checks by plain tuple
enumeration, plus the differential suites that compare them.
"""

import itertools
import logging
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import numpy as np

from makerboard.models.board import Player, StarVertex
from makerboard.models.exceptions import OracleCapExceeded
from makerboard.models.game import OracleReport
from makerboard.services.blocking_service import build_blocking_dag
from makerboard.services.board_service import GamePosition, build_board_spec
from makerboard.services.candidate_service import CandidateChecker
from makerboard.services.discrepancy_service import (
    BREAKER,
    MAKER,
    HypergraphGame,
    play_hypergraph_game,
    quota,
)
from makerboard.services.graph_service import named_graph
from makerboard.services.leveling_service import level_greedy, lower_neighbors

logger = logging.getLogger(__name__)

ORACLE_VERTEX_CAP = 14
ENUMERATION_BLOCK_CAP = 16
CANDIDATE_GRAPHS = ("k2", "c6", "k4", "petersen")

Value = Tuple[int, ...]


def _mask(flags: np.ndarray) -> int:
    return sum(1 << int(v) for v in np.flatnonzero(flags))


class HypergraphSolver:
    """
    Exhaustive minimax over the claims of a small hypergraph game.

    The value of a position is the ascending tuple of final Maker counts
    per hyperedge; Maker maximizes it lexicographically and Breaker
    minimizes it. Positions are memoized on (maker mask, breaker mask, mover).
    """

    def __init__(self, game: HypergraphGame):
        """
        Initialize the solver for the hyperedges of a game.

        Args:
            game: Game with at most ORACLE_VERTEX_CAP vertices

        Raises:
            OracleCapExceeded: If the game has too many vertices
        """
        if game.vertex_count > ORACLE_VERTEX_CAP:
            raise OracleCapExceeded(game.vertex_count, ORACLE_VERTEX_CAP)
        self.vertex_count = game.vertex_count
        self.hyperedges = [_mask(row) for row in game.incidence]
        self.full = (1 << game.vertex_count) - 1
        self.value = lru_cache(maxsize=None)(self._search)

    def _search(self, maker: int, breaker: int, maker_to_move: bool) -> Value:
        claimed = maker | breaker
        if claimed == self.full:
            return tuple(sorted(bin(maker & e).count("1") for e in self.hyperedges))
        values = []
        for v in range(self.vertex_count):
            bit = 1 << v
            if claimed & bit:
                continue
            if maker_to_move:
                values.append(self.value(maker | bit, breaker, False))
            else:
                values.append(self.value(maker, breaker | bit, True))
        return max(values) if maker_to_move else min(values)

    def position(self, game: HypergraphGame) -> Tuple[int, int]:
        """
        Claim masks of a game on the same hyperedges.
        """
        return _mask(game.owner == MAKER), _mask(game.owner == BREAKER)

    def best_breaker_vertex(self, game: HypergraphGame) -> Optional[int]:
        """
        Breaker's minimax move, lowest index on ties.

        Args:
            game: Current game

        Returns:
            Optional[int]: The vertex, None if nothing is left
        """
        maker, breaker = self.position(game)
        best: Optional[Tuple[Value, int]] = None
        for v in map(int, game.unclaimed()):
            value = self.value(maker, breaker | (1 << v), True)
            if best is None or value < best[0]:
                best = (value, v)
        return best[1] if best is not None else None


def minimax_hypergraph(F: HypergraphGame, mover: Player) -> Value:
    """
    Exact game value of F under optimal play from its current position.

    Args:
        F: Hypergraph game with at most 14 vertices
        mover: Player to move

    Returns:
        Value: Ascending per-hyperedge Maker counts under optimal play

    Raises:
        OracleCapExceeded: If F has more than 14 vertices
    """
    solver = HypergraphSolver(F)
    maker, breaker = solver.position(F)
    return solver.value(maker, breaker, mover == Player.MAKER)


class OptimalHypergraphBreaker:
    """
    Breaker following the minimax solver.
    """

    def __init__(self, solver: HypergraphSolver):
        """
        Initialize the adversary.

        Args:
            solver: Solver built on the hyperedges of the game to be played
        """
        self.solver = solver

    def next_vertex(self, game: HypergraphGame) -> Optional[int]:
        """
        Breaker's minimax move.

        Args:
            game: Hypergraph game in progress, matching the solved template

        Returns:
            Optional[int]: The vertex the solver picks for Breaker
        """
        return self.solver.best_breaker_vertex(game)


def verify_candidate_by_enumeration(pos: GamePosition, x: StarVertex, u: int, v: int) -> bool:
    """
    Candidate test of x with respect to (u, v) by enumerating every tuple.

    Args:
        pos: Position with small B sets
        x: Star-vertex of S_v
        u: Lower endpoint
        v: Upper endpoint

    Returns:
        bool: The candidate verdict
    """
    if any(len(pos.B[w]) > ENUMERATION_BLOCK_CAP for w in pos.B):
        raise OracleCapExceeded(max(len(b) for b in pos.B.values()), ENUMERATION_BLOCK_CAP)
    levels = pos.leveling.levels
    upper = [w for w in pos.graph.neighbors(u) if levels[u] < levels[w] < levels[v]]
    t = len(upper) + 1
    block = pos.B[u]
    for representatives in itertools.product(*(pos.B[w] for w in upper)):
        count = 0
        for b in block:
            star = StarVertex(u, b)
            if not pos.maker_holds(star, x):
                continue
            if all(pos.maker_holds(star, StarVertex(w, i)) for w, i in zip(upper, representatives)):
                count += 1
        if count * t * 2**t < len(block):
            return False
    return True


def random_candidate_position(seed: int) -> GamePosition:
    """
    Random position with every B set fixed and random Maker edges between them.

    Args:
        seed: Generator seed

    Returns:
        GamePosition: Position on one of the small named graphs
    """
    rng = np.random.default_rng(seed)
    g = named_graph(CANDIDATE_GRAPHS[seed % len(CANDIDATE_GRAPHS)])
    l = level_greedy(g)
    dag = build_blocking_dag(g, l)
    s = int(rng.integers(2, 5))
    spec = build_board_spec(g, l, dag, s)
    pos = GamePosition(g, l, dag, spec)
    for v in range(g.n):
        chosen = rng.choice(spec.block_sizes[v], size=s, replace=False)
        pos.set_B(v, tuple(int(i) for i in chosen))

    density = float(rng.uniform(0.3, 1.0))
    for a, b in g.edges():
        for i in pos.B[a]:
            for j in pos.B[b]:
                if rng.random() < density:
                    pos.claim(Player.MAKER, (StarVertex(a, i), StarVertex(b, j)))
    return pos


def random_hypergraph(seed: int, max_vertices: int = 10, max_hyperedges: int = 5) -> HypergraphGame:
    """
    Random small hypergraph game with nonempty hyperedges.

    Args:
        seed: Generator seed
        max_vertices: Largest vertex count
        max_hyperedges: Largest hyperedge count

    Returns:
        HypergraphGame: A fresh game
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_vertices + 1))
    rows = []
    for _ in range(int(rng.integers(1, max_hyperedges + 1))):
        row = rng.random(n) < rng.uniform(0.4, 1.0)
        if not row.any():
            row[int(rng.integers(n))] = True
        rows.append(row)
    return HypergraphGame(n, np.array(rows, dtype=bool))


def candidate_suite(seeds: Iterable[int]) -> OracleReport:
    """
    Compare the optimized candidate checker with tuple enumeration.

    Args:
        seeds: Seeds of the random positions

    Returns:
        OracleReport: Agreement counts
    """
    report = OracleReport(suite="candidate")
    for seed in seeds:
        pos = random_candidate_position(seed)
        checker = CandidateChecker(pos)
        report.instances += 1
        for v in range(pos.graph.n):
            for u in lower_neighbors(pos.graph, pos.leveling, v):
                for x in pos.B_vertices(v):
                    report.checks += 1
                    fast = checker.is_candidate_wrt_edge(x, u, v)
                    slow = verify_candidate_by_enumeration(pos, x, u, v)
                    if fast != slow:
                        report.disagreements += 1
                        report.details.append(f"seed {seed}: {x} w.r.t. v{u}: {fast} != {slow}")
    return report


def engine_suite(seeds: Iterable[int], max_vertices: int = 10) -> OracleReport:
    """
    Sandwich the exponential-weight engine between quota and optimum.

    Every instance is played by the engine against the optimal Breaker in
    both move orders. The final counts must not beat the minimax value, and
    every hyperedge must reach the quota.

    Args:
        seeds: Seeds of the random hypergraphs
        max_vertices: Largest vertex count

    Returns:
        OracleReport: Agreement counts
    """
    report = OracleReport(suite="engine")
    for seed in seeds:
        template = random_hypergraph(seed, max_vertices)
        solver = HypergraphSolver(template)
        report.instances += 1
        for maker_first in (True, False):
            game = HypergraphGame(template.vertex_count, template.incidence)
            mover = Player.MAKER if maker_first else Player.BREAKER
            optimum = solver.value(0, 0, maker_first)
            counts = play_hypergraph_game(game, OptimalHypergraphBreaker(solver), maker_first)
            result = tuple(sorted(int(c) for c in counts))
            report.checks += 1
            if result > optimum:
                report.disagreements += 1
                report.details.append(f"seed {seed}, {mover.value} first: {result} > {optimum}")
            report.checks += 1
            floor = quota(game.x, game.X)
            if min(result) < floor - 1e-9:
                report.disagreements += 1
                report.details.append(
                    f"seed {seed}, {mover.value} first: {min(result)} below quota {floor:.3f}"
                )
    logger.info("Engine suite: %s checks, %s disagreements", report.checks, report.disagreements)
    return report


def run_suites(names: List[str], seeds: int) -> List[OracleReport]:
    """
    Run differential suites by name.

    Args:
        names: "candidate" and/or "engine"
        seeds: Number of seeds per suite

    Returns:
        List[OracleReport]: One report per suite
    """
    reports = []
    for name in names:
        if name == "candidate":
            reports.append(candidate_suite(range(seeds)))
        else:
            reports.append(engine_suite(range(seeds)))
    return reports
