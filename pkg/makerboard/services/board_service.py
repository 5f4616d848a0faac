"""
Board service.

This module builds the implicit board H and holds the mutable game
position: the sparse ledger of claimed edges, the touched star-vertices,
the B_v selections and the ready/completed flags.
"""

import logging
from itertools import accumulate
from typing import Dict, List, Optional, Set, Tuple

from makerboard.models.board import (
    BoardSpec,
    BoardSummary,
    EdgeCountReport,
    Player,
    StarEdge,
    StarVertex,
)
from makerboard.models.exceptions import AlreadyClaimedError, BoardError, NotABoardEdgeError
from makerboard.models.graph import BlockingDag, Leveling, TargetGraph
from makerboard.services.graph_service import bound_log10

logger = logging.getLogger(__name__)

_INDEX_LIMIT = 2**63


def block_parameter(d: int) -> int:
    """
    Block parameter s_d = d^5 * 2^(d + 4).

    Args:
        d: Degree, at least 1

    Returns:
        int: s_d
    """
    if d < 1:
        raise BoardError(f"block_parameter needs d >= 1, got {d}")
    return d**5 * 2 ** (d + 4)


def build_board_spec(g: TargetGraph, l: Leveling, dag: BlockingDag, s: int) -> BoardSpec:
    """
    Size the blocks S_v = d * s^2 * |P(v)| + s.

    Args:
        g: Target graph
        l: Leveling the DAG was built from
        dag: Blocking graph
        s: Block parameter, at least 1

    Returns:
        BoardSpec: Block sizes and dense offsets

    Raises:
        BoardError: If s < 1 or the dense index space overflows 63 bits
    """
    if s < 1:
        raise BoardError(f"Block parameter s must be at least 1, got {s}")
    if len(l.levels) != g.n:
        raise BoardError("Leveling does not match the graph")
    sizes = tuple(g.d * s * s * dag.descendant_count(v) + s for v in range(g.n))
    if sum(sizes) >= _INDEX_LIMIT:
        raise BoardError(f"Board with {sum(sizes)} vertices overflows the index space")
    offsets = tuple([0] + list(accumulate(sizes))[:-1]) if sizes else ()
    return BoardSpec(s=s, block_sizes=sizes, block_offsets=offsets)


def edge_count(spec: BoardSpec, g: TargetGraph, r: int) -> EdgeCountReport:
    """
    Exact |E(H)| next to the bound |E(G)| * (d * s^2 * d^(2r) + s)^2.

    Args:
        spec: Board specification
        g: Target graph
        r: Level range of the leveling in use

    Returns:
        EdgeCountReport: Both values and their comparison
    """
    exact = sum(spec.block_sizes[u] * spec.block_sizes[v] for u, v in g.edges())
    s = spec.s
    bound = g.edge_total * (g.d * s * s * g.d ** (2 * r) + s) ** 2
    return EdgeCountReport(exact=exact, edge_bound=bound, within_bound=exact <= bound)


def board_summary(g: TargetGraph, l: Leveling, spec: BoardSpec) -> BoardSummary:
    """
    Summarize the board for reports and transcript headers.

    Args:
        g: Target graph
        l: Leveling
        spec: Board specification

    Returns:
        BoardSummary: Block sizes and edge counts
    """
    counts = edge_count(spec, g, l.r)
    return BoardSummary(
        n=g.n,
        d=g.d,
        r=l.r,
        s=spec.s,
        block_sizes=spec.block_sizes,
        vertex_total=spec.vertex_total,
        exact_edges=counts.exact,
        edge_bound_log10=bound_log10(counts.edge_bound),
        within_bound=counts.within_bound,
    )


class GamePosition:
    """
    Evolving position H* of the G-game.

    Only claimed edges are stored. Edges are kept with the lower-level
    endpoint first; a claim touches its upper endpoint.
    """

    def __init__(self, g: TargetGraph, l: Leveling, dag: BlockingDag, spec: BoardSpec):
        """
        Initialize an empty position.

        Args:
            g: Target graph
            l: Leveling
            dag: Blocking graph
            spec: Board specification
        """
        self.graph = g
        self.leveling = l
        self.dag = dag
        self.spec = spec
        self.maker_edges: Set[StarEdge] = set()
        self.breaker_edges: Set[StarEdge] = set()
        self.claimed_ids: Set[Tuple[int, int]] = set()
        self.maker_adjacency: Dict[StarVertex, Set[StarVertex]] = {}
        self.touched: Dict[int, Set[int]] = {v: set() for v in range(g.n)}
        self.B: Dict[int, Tuple[int, ...]] = {}
        self.ready: List[bool] = [False] * g.n
        self.completed: List[bool] = [False] * g.n

    def is_board_edge(self, a: StarVertex, b: StarVertex) -> bool:
        """
        Check whether (a, b) is an edge of H.

        Args:
            a: First star-vertex
            b: Second star-vertex

        Returns:
            bool: True iff both are board vertices of adjacent blocks
        """
        return (
            self.spec.contains(a)
            and self.spec.contains(b)
            and self.graph.has_edge(a.vertex, b.vertex)
        )

    def normalize(self, edge: StarEdge) -> StarEdge:
        """
        Order a board edge with its lower-level endpoint first.

        Args:
            edge: Pair of star-vertices in any order

        Returns:
            StarEdge: (lower, upper)

        Raises:
            NotABoardEdgeError: If the pair is not an edge of H
        """
        a, b = StarVertex(*edge[0]), StarVertex(*edge[1])
        if not self.is_board_edge(a, b):
            raise NotABoardEdgeError((a, b))
        levels = self.leveling.levels
        return (a, b) if levels[a.vertex] < levels[b.vertex] else (b, a)

    def edge_id(self, edge: StarEdge) -> Tuple[int, int]:
        """
        Dense ids of a (normalized) edge, lower endpoint first.
        """
        return (self.spec.dense_index(edge[0]), self.spec.dense_index(edge[1]))

    def is_claimed(self, edge: StarEdge) -> bool:
        """
        Check whether a (normalized) edge is claimed by either player.
        """
        return self.edge_id(edge) in self.claimed_ids

    def claim(self, player: Player, edge: StarEdge) -> StarEdge:
        """
        Claim an unclaimed board edge.

        The upper endpoint becomes touched. Ready and completed flags are
        left to the strategy.

        Args:
            player: Claiming player
            edge: Pair of star-vertices in any order

        Returns:
            StarEdge: The normalized claimed edge

        Raises:
            NotABoardEdgeError: If the pair is not an edge of H
            AlreadyClaimedError: If the edge is already claimed
        """
        edge = self.normalize(edge)
        if self.is_claimed(edge):
            raise AlreadyClaimedError(edge)
        lower, upper = edge
        if player == Player.MAKER:
            self.maker_edges.add(edge)
            self.maker_adjacency.setdefault(lower, set()).add(upper)
            self.maker_adjacency.setdefault(upper, set()).add(lower)
        else:
            self.breaker_edges.add(edge)
        self.claimed_ids.add(self.edge_id(edge))
        self.touched[upper.vertex].add(upper.index)
        return edge

    def is_touched(self, x: StarVertex) -> bool:
        """
        Check whether an edge from a lower level reached x.
        """
        return x.index in self.touched[x.vertex]

    def untouched_in(self, v: int) -> int:
        """
        Number of untouched star-vertices in S_v.

        Args:
            v: Target-graph vertex

        Returns:
            int: |S_v| minus the touched count
        """
        return self.spec.block_sizes[v] - len(self.touched[v])

    def maker_holds(self, a: StarVertex, b: StarVertex) -> bool:
        """
        Check whether Maker claimed the edge between a and b.
        """
        return b in self.maker_adjacency.get(a, ())

    def maker_neighbors(self, x: StarVertex) -> Set[StarVertex]:
        """
        Star-vertices joined to x by a Maker edge.
        """
        return self.maker_adjacency.get(x, set())

    def set_B(self, v: int, indices: Tuple[int, ...]) -> None:
        """
        Fix B_v.

        Args:
            v: Target-graph vertex
            indices: Block indices of the chosen star-vertices

        Raises:
            BoardError: If B_v is already fixed or an index is outside S_v
        """
        if v in self.B:
            raise BoardError(f"B_{v} is already determined")
        if any(not 0 <= i < self.spec.block_sizes[v] for i in indices):
            raise BoardError(f"B_{v} holds indices outside S_{v}")
        self.B[v] = tuple(sorted(indices))

    def B_vertices(self, v: int) -> List[StarVertex]:
        """
        Members of B_v as star-vertices in index order.
        """
        return [StarVertex(v, i) for i in self.B[v]]

    def b_determined(self, v: int) -> bool:
        """
        Check whether B_v is fixed.
        """
        return v in self.B

    def describe(self, v: Optional[int] = None) -> str:
        """
        Human readable summary of the position or of one block.

        Args:
            v: Optional vertex to describe in detail

        Returns:
            str: Summary text
        """
        if v is None:
            ready = [w for w in range(self.graph.n) if self.ready[w] and not self.completed[w]]
            return (
                f"maker edges {len(self.maker_edges)}, breaker edges {len(self.breaker_edges)}, "
                f"completed {sum(self.completed)}/{self.graph.n}, ready-not-completed {ready}"
            )
        status = "completed" if self.completed[v] else "ready" if self.ready[v] else "waiting"
        head = ", ".join(str(x) for x in self.B_vertices(v)[:8]) if v in self.B else "-"
        return (
            f"v{v}: level {self.leveling.levels[v]}, |S| {self.spec.block_sizes[v]}, "
            f"untouched {self.untouched_in(v)}, {status}, B {head}"
        )
