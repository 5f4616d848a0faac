"""
Breaker service.

This module contains the adversaries Maker is tested against: policies for
the full G-game (random, greedy_subgame, scatter, scripted, interactive)
and policies for single hypergraph games.
"""

import logging
import sys
from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, TextIO

import numpy as np

from makerboard.models.board import BoardSpec, StarEdge, StarVertex, parse_edge
from makerboard.models.exceptions import (
    BoardError,
    BreakerPolicyError,
    ConfigError,
    GameAborted,
)
from makerboard.models.game import BreakerKind
from makerboard.services.board_service import GamePosition
from makerboard.services.discrepancy_service import FREE, HypergraphGame
from makerboard.services.leveling_service import lower_neighbors

if TYPE_CHECKING:
    from makerboard.services.maker_service import MakerStrategy

logger = logging.getLogger(__name__)

RANDOM_RETRIES = 64


class BreakerPolicy(ABC):
    """
    Base class of the G-game adversaries.

    A policy returns an unclaimed board edge or None to pass.
    """

    kind: BreakerKind

    def __init__(self):
        """
        Initialize the policy.
        """
        self.strategy: Optional["MakerStrategy"] = None

    def attach(self, strategy: "MakerStrategy") -> None:
        """
        Give the policy read access to Maker's bookkeeping.

        Args:
            strategy: The strategy Breaker plays against
        """
        self.strategy = strategy

    @abstractmethod
    def next_edge(self, pos: GamePosition) -> Optional[StarEdge]:
        """
        Choose Breaker's next edge.

        Args:
            pos: Current position

        Returns:
            Optional[StarEdge]: An unclaimed board edge, None to pass
        """


class RandomBreaker(BreakerPolicy):
    """
    Uniform G-edge, then uniform indices in both blocks; retried on claimed edges.
    """

    kind: BreakerKind = "random"

    def __init__(self, seed: int):
        """
        Initialize the policy.

        Args:
            seed: Generator seed
        """
        super().__init__()
        self.rng = np.random.default_rng(seed)

    def next_edge(self, pos: GamePosition) -> Optional[StarEdge]:
        """
        Sample an unclaimed board edge.

        Args:
            pos: Current position

        Returns:
            Optional[StarEdge]: A random unclaimed edge, None when every
                retry hit a claimed edge or G has no edges
        """
        edges = list(pos.graph.edges())
        if not edges:
            return None
        sizes = pos.spec.block_sizes
        for _ in range(RANDOM_RETRIES):
            u, v = edges[int(self.rng.integers(len(edges)))]
            a = StarVertex(u, int(self.rng.integers(sizes[u])))
            b = StarVertex(v, int(self.rng.integers(sizes[v])))
            edge = pos.normalize((a, b))
            if not pos.is_claimed(edge):
                return edge
        return None


class GreedySubgameBreaker(BreakerPolicy):
    """
    Attack the live subgame hyperedge with the smallest Maker slack.

    The slack of a hyperedge is its Maker count minus the count its subgame
    needs (s / (t 2^t), or s / 2 for pairing subgames). Ties go to the
    first subgame in (u, x) order and the lowest hyperedge; Breaker claims
    the lowest free vertex of the chosen hyperedge. Without a live
    subgame the policy plays randomly.
    """

    kind: BreakerKind = "greedy_subgame"

    def __init__(self, seed: int):
        """
        Initialize the policy.

        Args:
            seed: Seed of the random fallback
        """
        super().__init__()
        self.fallback = RandomBreaker(seed)

    def next_edge(self, pos: GamePosition) -> Optional[StarEdge]:
        """
        Claim a free edge of the hyperedge closest to failing.

        Args:
            pos: Current position

        Returns:
            Optional[StarEdge]: An edge of the smallest-slack live subgame,
                else a random edge
        """
        best = None
        if self.strategy is not None:
            for state in self.strategy.frontier():
                game = state.game
                s = len(state.block)
                need = s / 2 if state.t == 1 else s / (state.t * 2**state.t)
                free = game.owner == FREE
                open_rows = (game.incidence & free[None, :]).any(axis=1)
                if not open_rows.any():
                    continue
                slack = np.where(open_rows, game.slack(need), np.inf)
                row = int(np.argmin(slack))
                if best is None or slack[row] < best[0]:
                    best = (float(slack[row]), state, row)
        if best is None:
            return self.fallback.next_edge(pos)
        _, state, row = best
        members = np.flatnonzero(state.game.incidence[row] & (state.game.owner == FREE))
        return state.edge_at(int(members[0]))


class ScatterBreaker(BreakerPolicy):
    """
    Touch S_v of the not-yet-ready vertex with the most descendants.

    Every move claims (u#0, v#y) with u the first lower neighbor of v and y
    the lowest untouched index of S_v, spending Breaker's moves on the untouched reserve.
    """

    kind: BreakerKind = "scatter"

    def __init__(self, seed: int):
        """
        Initialize the policy.

        Args:
            seed: Seed of the random fallback
        """
        super().__init__()
        self.fallback = RandomBreaker(seed)
        self._cursor: Dict[int, int] = {}

    def target(self, pos: GamePosition) -> Optional[int]:
        """
        Not-ready vertex with a lower neighbor and the largest |P(v)|, lowest id on ties.
        """
        best: Optional[int] = None
        for v in range(pos.graph.n):
            if pos.ready[v] or not lower_neighbors(pos.graph, pos.leveling, v):
                continue
            if pos.untouched_in(v) == 0:
                continue
            if best is None or pos.dag.descendant_count(v) > pos.dag.descendant_count(best):
                best = v
        return best

    def next_edge(self, pos: GamePosition) -> Optional[StarEdge]:
        """
        Touch the next untouched star-vertex of the target block.

        Args:
            pos: Current position

        Returns:
            Optional[StarEdge]: An edge into the target block, a random
                edge once no target is left
        """
        v = self.target(pos)
        if v is None:
            return self.fallback.next_edge(pos)
        u = min(lower_neighbors(pos.graph, pos.leveling, v))
        index = self._cursor.get(v, 0)
        while index in pos.touched[v]:
            index += 1
        self._cursor[v] = index
        return pos.normalize((StarVertex(u, 0), StarVertex(v, index)))


class ScriptedBreaker(BreakerPolicy):
    """
    Replay a fixed move list; passes once the list is exhausted.
    """

    kind: BreakerKind = "scripted"

    def __init__(self, moves: Sequence[Optional[StarEdge]]):
        """
        Initialize the policy.

        Args:
            moves: Edges to play in order, None for a pass
        """
        super().__init__()
        self.moves = list(moves)
        self.played = 0

    def next_edge(self, pos: GamePosition) -> Optional[StarEdge]:
        """
        Replay the next scripted move.

        Args:
            pos: Current position

        Returns:
            Optional[StarEdge]: The normalized move, None for a pass or an
                exhausted script

        Raises:
            BreakerPolicyError: If the move is not a free board edge
        """
        if self.played >= len(self.moves):
            return None
        move = self.moves[self.played]
        self.played += 1
        if move is None:
            return None
        try:
            edge = pos.normalize(move)
        except BoardError as exc:
            raise BreakerPolicyError(f"Scripted move {self.played}: {exc.detail}") from exc
        if pos.is_claimed(edge):
            raise BreakerPolicyError(f"Scripted move {self.played}: edge is already claimed")
        return edge


def parse_script(text: str) -> List[Optional[StarEdge]]:
    """
    Parse a move script: one "u#i v#j" edge or "pass" per line.

    Blank lines and lines starting with '#' are skipped.

    Args:
        text: Script text

    Returns:
        List[Optional[StarEdge]]: Moves, None for passes

    Raises:
        BreakerPolicyError: On a malformed line
    """
    moves: List[Optional[StarEdge]] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped == "pass":
            moves.append(None)
            continue
        try:
            moves.append(parse_edge(stripped))
        except BoardError as exc:
            raise BreakerPolicyError(f"Script line {line_number}: {exc.detail}") from exc
    return moves


class InteractiveBreaker(BreakerPolicy):
    """
    Human Breaker on a terminal.

    Commands: "u#i v#j" claims an edge, "pass" passes, "show" or "show v"
    prints the position, "quit" aborts the game.
    """

    kind: BreakerKind = "interactive"

    def __init__(self, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None):
        """
        Initialize the policy.

        Args:
            stdin: Input stream, defaults to sys.stdin
            stdout: Output stream, defaults to sys.stdout
        """
        super().__init__()
        self.stdin = stdin or sys.stdin
        self.stdout = stdout or sys.stdout

    def _say(self, text: str) -> None:
        self.stdout.write(text + "\n")
        self.stdout.flush()

    def next_edge(self, pos: GamePosition) -> Optional[StarEdge]:
        """
        Prompt until the user enters a free edge, pass or quit.

        Raises:
            GameAborted: On quit or end of input
        """
        self._say(pos.describe())
        while True:
            self.stdout.write("breaker> ")
            self.stdout.flush()
            line = self.stdin.readline()
            if not line:
                raise GameAborted()
            command = line.strip()
            if command == "quit":
                raise GameAborted()
            if command == "pass":
                return None
            if command == "show" or command.startswith("show "):
                self._show(pos, command[len("show"):].strip())
                continue
            try:
                edge = pos.normalize(parse_edge(command))
            except BoardError as exc:
                self._say(f"error: {exc.detail}")
                continue
            if pos.is_claimed(edge):
                self._say("error: edge is already claimed")
                continue
            return edge

    def _show(self, pos: GamePosition, argument: str) -> None:
        if not argument:
            self._say(pos.describe())
            return
        vertex = argument[1:] if argument.startswith("v") else argument
        if not vertex.isdigit() or int(vertex) >= pos.graph.n:
            self._say(f"error: no vertex '{argument}'")
            return
        self._say(pos.describe(int(vertex)))


def make_policy(kind: BreakerKind, seed: int = 0, script: Optional[str] = None) -> BreakerPolicy:
    """
    Build a policy from the run configuration.

    Args:
        kind: Policy name
        seed: Seed of the randomized policies
        script: Script path for the scripted policy

    Returns:
        BreakerPolicy: A fresh policy

    Raises:
        ConfigError: For an unknown kind or a missing script
    """
    if kind == "random":
        return RandomBreaker(seed)
    if kind == "greedy_subgame":
        return GreedySubgameBreaker(seed)
    if kind == "scatter":
        return ScatterBreaker(seed)
    if kind == "scripted":
        if script is None:
            return ScriptedBreaker([])
        try:
            text = Path(script).read_text()
        except OSError as exc:
            raise ConfigError(f"Cannot read script {script}: {exc}") from exc
        return ScriptedBreaker(parse_script(text))
    if kind == "interactive":
        return InteractiveBreaker()
    raise ConfigError(f"Unknown breaker policy '{kind}'")


def next_breaker_edge(
    policy: BreakerPolicy, pos: GamePosition, spec: BoardSpec
) -> Optional[StarEdge]:
    """
    Ask a policy for its move and check it against the board.

    Args:
        policy: Breaker policy
        pos: Current position
        spec: Board specification of pos

    Returns:
        Optional[StarEdge]: An unclaimed board edge, None for a pass

    Raises:
        BreakerPolicyError: If the policy returns an illegal edge
    """
    edge = policy.next_edge(pos)
    if edge is None:
        return None
    a, b = edge
    if not (spec.contains(a) and spec.contains(b)) or not pos.is_board_edge(a, b):
        raise BreakerPolicyError(f"{policy.kind} Breaker returned a non-board edge {a} {b}")
    if pos.is_claimed(pos.normalize(edge)):
        raise BreakerPolicyError(f"{policy.kind} Breaker returned a claimed edge {a} {b}")
    return edge


class RandomHypergraphBreaker:
    """
    Uniform unclaimed vertex.
    """

    def __init__(self, seed: int):
        """
        Initialize the adversary.
        """
        self.rng = np.random.default_rng(seed)

    def next_vertex(self, game: HypergraphGame) -> Optional[int]:
        """
        Uniform unclaimed vertex.

        Args:
            game: Hypergraph game in progress

        Returns:
            Optional[int]: A free vertex, None when none is left
        """
        free = game.unclaimed()
        if free.size == 0:
            return None
        return int(free[self.rng.integers(free.size)])


class GreedyHypergraphBreaker:
    """
    Lowest free vertex of the hyperedge with the smallest Maker count.
    """

    def next_vertex(self, game: HypergraphGame) -> Optional[int]:
        """
        Attack the open hyperedge with the fewest Maker vertices.

        Args:
            game: Hypergraph game in progress

        Returns:
            Optional[int]: Lowest free vertex of that hyperedge, the lowest
                free vertex once no hyperedge is open, None when none is left
        """
        free = game.owner == FREE
        open_rows = (game.incidence & free[None, :]).any(axis=1)
        if not open_rows.any():
            free_vertices = np.flatnonzero(free)
            return int(free_vertices[0]) if free_vertices.size else None
        counts = np.where(open_rows, game.maker_counts, np.iinfo(np.int64).max)
        row = int(np.argmin(counts))
        return int(np.flatnonzero(game.incidence[row] & free)[0])


class PassingHypergraphBreaker:
    """
    Never claims anything.
    """

    def next_vertex(self, game: HypergraphGame) -> Optional[int]:
        """
        Pass.

        Args:
            game: Hypergraph game in progress

        Returns:
            Optional[int]: Always None
        """
        return None
