"""
Board models for the G-game.

This module defines star-vertex addressing, the implicit board
specification H and the report records derived from it.
"""

import re
from enum import Enum
from typing import NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from .exceptions import BoardError

_STAR_PATTERN = re.compile(r"^v?(\d+)#(\d+)$")


class Player(str, Enum):
    """
    Player enumeration.
    """

    MAKER = "maker"
    BREAKER = "breaker"


class StarVertex(NamedTuple):
    """
    Vertex of the board: the index-th member of the block S_vertex.
    """

    vertex: int
    index: int

    def __str__(self) -> str:
        return f"v{self.vertex}#{self.index}"

    @classmethod
    def parse(cls, text: str) -> "StarVertex":
        """
        Parse "v{v}#{idx}" (the leading "v" is optional).

        Args:
            text: Star-vertex notation

        Returns:
            StarVertex: The parsed address

        Raises:
            BoardError: If the text is not in star-vertex notation
        """
        match = _STAR_PATTERN.match(text.strip())
        if not match:
            raise BoardError(f"Cannot parse star-vertex '{text}'")
        return cls(int(match.group(1)), int(match.group(2)))


# Board edges are kept with the lower-level endpoint first.
StarEdge = Tuple[StarVertex, StarVertex]


def format_edge(edge: StarEdge) -> str:
    """
    Render a star-edge as "v{u}#{i} v{v}#{j}".

    Args:
        edge: The star-edge

    Returns:
        str: Edge notation used in transcripts and scripts
    """
    return f"{edge[0]} {edge[1]}"


def parse_edge(text: str) -> StarEdge:
    """
    Parse "u#i v#j" into an (unnormalized) pair of star-vertices.

    Args:
        text: Two star-vertices separated by whitespace

    Returns:
        StarEdge: The parsed pair

    Raises:
        BoardError: If the text does not hold exactly two star-vertices
    """
    parts = text.split()
    if len(parts) != 2:
        raise BoardError(f"Expected two star-vertices, got '{text.strip()}'")
    return (StarVertex.parse(parts[0]), StarVertex.parse(parts[1]))


class BoardSpec(BaseModel):
    """
    Implicit board H.

    The board is never materialized: S_v holds block_sizes[v] star-vertices
    and (a, b) is an edge iff a in S_u, b in S_v and (u, v) is an edge of G.

    Attributes:
        s: Block parameter
        block_sizes: |S_v| = d * s^2 * |P(v)| + s per vertex
        block_offsets: Dense index of the first star-vertex of every block
    """

    model_config = ConfigDict(frozen=True)

    s: int
    block_sizes: Tuple[int, ...]
    block_offsets: Tuple[int, ...]

    def block_size(self, v: int) -> int:
        """
        |S_v|.
        """
        return self.block_sizes[v]

    def contains(self, x: StarVertex) -> bool:
        """
        Check whether a star-vertex addresses an existing board vertex.

        Args:
            x: Star-vertex

        Returns:
            bool: True if x lies in some block S_v
        """
        return 0 <= x.vertex < len(self.block_sizes) and 0 <= x.index < self.block_sizes[x.vertex]

    def dense_index(self, x: StarVertex) -> int:
        """
        Dense integer id of a star-vertex: the offset of S_v plus the index.
        """
        return self.block_offsets[x.vertex] + x.index

    @property
    def vertex_total(self) -> int:
        """
        |V(H)|.
        """
        return sum(self.block_sizes)


class EdgeCountReport(BaseModel):
    """
    Exact board edge count next to the displayed upper bound.

    Attributes:
        exact: Sum over edges (u, v) of G of |S_u| * |S_v|
        edge_bound: |E(G)| * (d * s^2 * d^(2r) + s)^2
        within_bound: exact <= edge_bound
    """

    exact: int
    edge_bound: int
    within_bound: bool


class BoardSummary(BaseModel):
    """
    Board summary emitted by the `board` command.

    Attributes:
        n: Vertex count of G
        d: Degree of G
        r: Level range of the leveling
        s: Block parameter
        block_sizes: |S_v| per vertex
        vertex_total: |V(H)|
        exact_edges: Exact |E(H)|
        edge_bound_log10: log10 of the bound on |E(H)|, None when zero
        within_bound: Exact count is at most the bound
    """

    n: int
    d: int
    r: int
    s: int
    block_sizes: Tuple[int, ...]
    vertex_total: int
    exact_edges: int
    edge_bound_log10: Optional[float]
    within_bound: bool


class CandidateScheme(BaseModel):
    """
    The B sets of every vertex together with the level order v_1..v_n.

    Attributes:
        B: Sorted block indices of B_v for every vertex
        order: Vertices sorted by ascending (level, id)
    """

    model_config = ConfigDict(frozen=True)

    B: Tuple[Tuple[int, ...], ...]
    order: Tuple[int, ...]
