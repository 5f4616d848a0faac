"""
Target graph, leveling and blocking-graph models.

This module defines the immutable records the construction is built from:
the d-regular target graph G, a level labeling of its vertices and the
directed blocking graph D with its descendant sets.
"""

from typing import FrozenSet, Iterator, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, PrivateAttr


class TargetGraph(BaseModel):
    """
    Simple undirected graph on the dense vertex ids 0..n-1.

    Attributes:
        n: Vertex count
        d: Degree (the maximum degree when loaded without regularity check)
        adjacency: Per-vertex sorted neighbor tuples
    """

    model_config = ConfigDict(frozen=True)

    n: int
    d: int
    adjacency: Tuple[Tuple[int, ...], ...]

    _neighbor_sets: Optional[Tuple[FrozenSet[int], ...]] = PrivateAttr(default=None)
    _nx_graph: Optional[nx.Graph] = PrivateAttr(default=None)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        """
        Get the sorted neighbors of a vertex.

        Args:
            v: Vertex id

        Returns:
            Tuple[int, ...]: Neighbors of v
        """
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        """
        Check whether (u, v) is an edge of the graph.

        Args:
            u: First vertex id
            v: Second vertex id

        Returns:
            bool: True if u and v are adjacent
        """
        if self._neighbor_sets is None:
            self._neighbor_sets = tuple(frozenset(adj) for adj in self.adjacency)
        return 0 <= u < self.n and v in self._neighbor_sets[u]

    def edges(self) -> Iterator[Tuple[int, int]]:
        """
        Iterate over the edges as (u, v) pairs with u < v.

        Returns:
            Iterator[Tuple[int, int]]: Edges in lexicographic order
        """
        for u, adj in enumerate(self.adjacency):
            for v in adj:
                if u < v:
                    yield (u, v)

    @property
    def edge_total(self) -> int:
        """
        Number of edges |E(G)|.
        """
        return sum(len(adj) for adj in self.adjacency) // 2

    def is_regular(self) -> bool:
        """
        Check whether every vertex has degree d.

        Returns:
            bool: True if the graph is d-regular
        """
        return all(len(adj) == self.d for adj in self.adjacency)

    def to_networkx(self) -> nx.Graph:
        """
        Get a networkx view of the graph, built once and cached.

        Returns:
            nx.Graph: The graph with nodes 0..n-1
        """
        if self._nx_graph is None:
            graph = nx.Graph()
            graph.add_nodes_from(range(self.n))
            graph.add_edges_from(self.edges())
            self._nx_graph = graph
        return self._nx_graph


class Leveling(BaseModel):
    """
    Level labeling l: V(G) -> {1..r}.

    Attributes:
        levels: Level of every vertex
        r: Level-range bound used to produce the labeling
    """

    model_config = ConfigDict(frozen=True)

    levels: Tuple[int, ...]
    r: int

    def level(self, v: int) -> int:
        """
        Get the level of a vertex.

        Args:
            v: Vertex id

        Returns:
            int: l(v)
        """
        return self.levels[v]

    def order(self) -> List[int]:
        """
        Vertices sorted by ascending (level, id): the ordering v_1..v_n.

        Returns:
            List[int]: Vertex ids in level order
        """
        return sorted(range(len(self.levels)), key=lambda v: (self.levels[v], v))

    def to_text(self) -> str:
        """
        Serialize as "vertex level" lines.

        Returns:
            str: One line per vertex
        """
        return "".join(f"{v} {level}\n" for v, level in enumerate(self.levels))


class BlockingDag(BaseModel):
    """
    Directed blocking graph D with materialized descendant sets.

    Descendant sets are stored as integer bitsets: bit u of descendants[v]
    is set iff u is in P(v).

    Attributes:
        arcs: Per-vertex sorted out-neighbors (v -> u iff u blocks v)
        descendants: Per-vertex bitset of P(v)
    """

    model_config = ConfigDict(frozen=True)

    arcs: Tuple[Tuple[int, ...], ...]
    descendants: Tuple[int, ...]

    def out_degree(self, v: int) -> int:
        """
        Out-degree of v in D.
        """
        return len(self.arcs[v])

    def descendant_set(self, v: int) -> FrozenSet[int]:
        """
        Get P(v) as a set of vertex ids.

        Args:
            v: Vertex id

        Returns:
            FrozenSet[int]: Descendants of v
        """
        bits = self.descendants[v]
        return frozenset(u for u in range(bits.bit_length()) if bits >> u & 1)

    def descendant_count(self, v: int) -> int:
        """
        |P(v)|.
        """
        return bin(self.descendants[v]).count("1")

    def predecessors(self, v: int) -> List[int]:
        """
        Vertices with an arc into v.

        Args:
            v: Vertex id

        Returns:
            List[int]: In-neighbors of v in D
        """
        return [w for w, out in enumerate(self.arcs) if v in out]

    def arcs_text(self) -> str:
        """
        Serialize the arc list as "v u" lines.

        Returns:
            str: One line per arc
        """
        return "".join(f"{v} {u}\n" for v, out in enumerate(self.arcs) for u in out)


class DagBoundsReport(BaseModel):
    """
    Bounds of the blocking graph against the out-degree and descendant limits.

    Attributes:
        max_out_degree: Largest out-degree in D
        max_descendants: Largest |P(v)|
        out_degree_bound: d squared
        descendant_bound_log10: log10 of (d squared) to the power r, None when zero
        ball_bound_ok: Every out-degree is at most the distance-2 ball size
        passed: All three checks hold
    """

    max_out_degree: int
    max_descendants: int
    out_degree_bound: int
    descendant_bound_log10: Optional[float]
    ball_bound_ok: bool
    passed: bool


class LllCondition(BaseModel):
    """
    Parameters of the Local Lemma argument behind the random leveling.

    Attributes:
        d: Degree
        r: Level range
        p: Bound (d + d^2) / r on the probability of a bad event
        k: Dependency bound d + d^2 + d^3 + d^4
        satisfied: Whether e * p * (k + 1) <= 1
    """

    d: int
    r: int
    p: float
    k: int
    satisfied: bool
