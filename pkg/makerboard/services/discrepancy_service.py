"""
Discrepancy engine for positional games on hypergraphs.

Maker and Breaker alternately claim vertices of a hypergraph F. Maker
plays the exponential-weight strategy: every hyperedge e carries the weight
exp(lam * (b_e - m_e)), where b_e and m_e count Breaker's and Maker's
vertices in e, and Maker claims the unclaimed vertex of largest total
weight, with lam = sqrt(2 ln(2X) / x) for X hyperedges of minimum size x.
Against every Breaker this keeps at least x/2 - sqrt(x ln(2X) / 2)
vertices of each hyperedge for Maker.
"""

import math
from typing import Iterable, Optional, Protocol, Sequence, Union

import numpy as np

from makerboard.models.board import Player
from makerboard.models.exceptions import BoardError, BreakerPolicyError

FREE, MAKER, BREAKER = 0, 1, 2


def quota(x: int, X: int) -> float:
    """
    Guaranteed Maker share x/2 - sqrt(x ln(2X) / 2) of every hyperedge.

    Args:
        x: Minimum hyperedge size, at least 1
        X: Number of hyperedges, at least 1

    Returns:
        float: The quota, possibly negative
    """
    return x / 2 - math.sqrt(x * math.log(2 * X) / 2)


class HypergraphGame:
    """
    Positional game on a hypergraph with per-hyperedge claim counts.

    Attributes:
        vertex_count: |V(F)|
        incidence: X by |V(F)| boolean matrix
        maker_counts: Maker vertices per hyperedge
        breaker_counts: Breaker vertices per hyperedge
        x: Minimum initial hyperedge size (0 without hyperedges)
        X: Number of hyperedges
        lam: Weight exponent, None when the game is degenerate
    """

    def __init__(self, vertex_count: int, hyperedges: Union[np.ndarray, Sequence[Iterable[int]]]):
        """
        Initialize a fresh game.

        Args:
            vertex_count: Number of vertices
            hyperedges: Boolean incidence matrix, or one vertex iterable per hyperedge
        """
        self.vertex_count = vertex_count
        if isinstance(hyperedges, np.ndarray):
            # Shared, never written: games on the same hyperedges reuse one matrix.
            incidence = hyperedges.astype(bool, copy=False).reshape(-1, vertex_count)
        else:
            incidence = np.zeros((len(hyperedges), vertex_count), dtype=bool)
            for row, members in enumerate(hyperedges):
                incidence[row, list(members)] = True
        self.incidence = incidence
        self.owner = np.zeros(vertex_count, dtype=np.int8)
        self.maker_counts = np.zeros(incidence.shape[0], dtype=np.int64)
        self.breaker_counts = np.zeros(incidence.shape[0], dtype=np.int64)
        self.sizes = incidence.sum(axis=1)
        self.X = int(incidence.shape[0])
        self.x = int(self.sizes.min()) if self.X else 0

        positive = self.sizes[self.sizes > 0]
        if positive.size:
            self.lam: Optional[float] = math.sqrt(2 * math.log(2 * self.X) / int(positive.min()))
        else:
            self.lam = None

    @property
    def unclaimed_count(self) -> int:
        """
        Number of unclaimed vertices.
        """
        return int(np.count_nonzero(self.owner == FREE))

    def unclaimed(self) -> np.ndarray:
        """
        Indices of unclaimed vertices in ascending order.
        """
        return np.flatnonzero(self.owner == FREE)

    def is_free(self, vertex: int) -> bool:
        """
        Check whether a vertex is unclaimed.
        """
        return 0 <= vertex < self.vertex_count and self.owner[vertex] == FREE

    def claim(self, vertex: int, player: Player) -> None:
        """
        Claim a vertex and update the hyperedge counts.

        Args:
            vertex: Vertex index
            player: Claiming player

        Raises:
            BoardError: If the vertex is out of range or already claimed
        """
        if not self.is_free(vertex):
            raise BoardError(f"Hypergraph vertex {vertex} is not free")
        column = self.incidence[:, vertex]
        if player == Player.MAKER:
            self.owner[vertex] = MAKER
            self.maker_counts[column] += 1
        else:
            self.owner[vertex] = BREAKER
            self.breaker_counts[column] += 1

    def potential(self) -> float:
        """
        Sum over hyperedges of exp(lam * (b_e - m_e)).
        """
        if self.lam is None:
            return float(self.X)
        return float(np.exp(self.lam * (self.breaker_counts - self.maker_counts)).sum())

    def vertex_weights(self) -> np.ndarray:
        """
        Total weight of the hyperedges through every vertex, up to a common factor.

        Returns:
            np.ndarray: One weight per vertex
        """
        exponents = self.lam * (self.breaker_counts - self.maker_counts)
        hyperedge_weights = np.exp(exponents - exponents.max())
        return hyperedge_weights @ self.incidence

    def maker_move(self) -> int:
        """
        Choose Maker's vertex: largest weight, lowest index on ties.

        Returns:
            int: An unclaimed vertex

        Raises:
            BoardError: If no vertex is left
        """
        free = self.owner == FREE
        if not free.any():
            raise BoardError("No unclaimed vertex left for Maker")
        if self.lam is None:
            return int(np.argmax(free))
        weights = np.where(free, self.vertex_weights(), -np.inf)
        return int(np.argmax(weights))

    def slack(self, threshold: float) -> np.ndarray:
        """
        Maker's margin over a per-hyperedge threshold.

        Args:
            threshold: Required Maker count

        Returns:
            np.ndarray: maker_count - threshold per hyperedge
        """
        return self.maker_counts - threshold


class PairingGame(HypergraphGame):
    """
    Single-hyperedge game covering the whole board, played without weights.

    Maker answers every claim with the lowest unclaimed vertex, which keeps
    Maker's count at least Breaker's.
    """

    def __init__(self, vertex_count: int):
        """
        Initialize a pairing game on vertex_count vertices.
        """
        super().__init__(vertex_count, [range(vertex_count)])

    def maker_move(self) -> int:
        """
        Lowest unclaimed vertex.
        """
        free = self.owner == FREE
        if not free.any():
            raise BoardError("No unclaimed vertex left for Maker")
        return int(np.argmax(free))


class HypergraphAdversary(Protocol):
    """
    Breaker side of a hypergraph game.
    """

    def next_vertex(self, game: HypergraphGame) -> Optional[int]:
        """
        Return an unclaimed vertex, or None to pass.
        """


def play_hypergraph_game(
    F: HypergraphGame, breaker: HypergraphAdversary, maker_first: bool = False
) -> np.ndarray:
    """
    Play F to the end with alternating moves.

    Args:
        F: Fresh hypergraph game
        breaker: Breaker policy
        maker_first: Maker moves first; Breaker starts otherwise

    Returns:
        np.ndarray: Final Maker count per hyperedge

    Raises:
        BreakerPolicyError: If the policy returns a claimed vertex
    """
    maker_turn = maker_first
    while F.unclaimed_count:
        if maker_turn:
            F.claim(F.maker_move(), Player.MAKER)
        else:
            vertex = breaker.next_vertex(F)
            if vertex is not None:
                if not F.is_free(vertex):
                    raise BreakerPolicyError(f"Breaker chose unavailable vertex {vertex}")
                F.claim(vertex, Player.BREAKER)
        maker_turn = not maker_turn
    return F.maker_counts.copy()
