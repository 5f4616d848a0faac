"""
Target graph service.

This module loads, generates and queries the d-regular target graph G.
Random regular graphs come from the pairing (configuration) model with
rejection of loops and parallel edges.
"""

import logging
import math
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

import networkx as nx
import numpy as np

from makerboard.models.exceptions import GenerationBudgetExceeded, GraphError
from makerboard.models.graph import TargetGraph

logger = logging.getLogger(__name__)

DEFAULT_PAIRING_ATTEMPTS = 1000


def from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> TargetGraph:
    """
    Build a TargetGraph from an edge iterable.

    Args:
        n: Vertex count
        edges: Pairs of vertex ids

    Returns:
        TargetGraph: Graph whose degree field is the maximum degree
    """
    neighbors: List[Set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        neighbors[u].add(v)
        neighbors[v].add(u)
    adjacency = tuple(tuple(sorted(adj)) for adj in neighbors)
    degree = max((len(adj) for adj in adjacency), default=0)
    return TargetGraph(n=n, d=degree, adjacency=adjacency)


def from_networkx(graph: nx.Graph) -> TargetGraph:
    """
    Convert a networkx graph on nodes 0..n-1.

    Args:
        graph: networkx graph

    Returns:
        TargetGraph: The same graph
    """
    return from_edges(graph.number_of_nodes(), graph.edges())


def load_graph(
    edge_list_text: str, require_regular: bool = False, n: Optional[int] = None
) -> TargetGraph:
    """
    Parse an edge list with one "u v" pair of 0-based ids per line.

    Blank lines and lines starting with '#' are skipped.

    Args:
        edge_list_text: The edge list
        require_regular: Reject graphs whose degrees differ
        n: Optional vertex count, to keep trailing isolated vertices

    Returns:
        TargetGraph: The parsed graph with n = 1 + max id

    Raises:
        GraphError: On parse errors, self-loops, duplicate edges, or a
            non-regular graph when require_regular is set
    """
    edges: List[Tuple[int, int]] = []
    seen: Set[FrozenSet[int]] = set()
    for line_number, line in enumerate(edge_list_text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2 or not all(part.isdigit() for part in parts):
            raise GraphError(f"Line {line_number}: expected two vertex ids, got '{stripped}'")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphError(f"Line {line_number}: self-loop at vertex {u}")
        key = frozenset((u, v))
        if key in seen:
            raise GraphError(f"Line {line_number}: duplicate edge {u} {v}")
        seen.add(key)
        edges.append((u, v))

    vertex_count = 1 + max((max(e) for e in edges), default=-1)
    if n is not None:
        if n < vertex_count:
            raise GraphError(f"Vertex count {n} is below the largest id + 1 ({vertex_count})")
        vertex_count = n
    graph = from_edges(vertex_count, edges)
    if require_regular and not graph.is_regular():
        raise GraphError(f"Graph is not regular (maximum degree {graph.d})")
    return graph


def gen_cycle(n: int) -> TargetGraph:
    """
    Generate the cycle C_n.

    Args:
        n: Vertex count, at least 3

    Returns:
        TargetGraph: The 2-regular cycle 0-1-...-(n-1)-0

    Raises:
        GraphError: If n < 3
    """
    if n < 3:
        raise GraphError(f"A cycle needs at least 3 vertices, got {n}")
    return from_edges(n, ((v, (v + 1) % n) for v in range(n)))


def gen_empty(n: int) -> TargetGraph:
    """
    Generate the edgeless graph on n vertices (0-regular).
    """
    if n < 1:
        raise GraphError(f"An edgeless graph needs at least 1 vertex, got {n}")
    return from_edges(n, ())


def gen_random_regular(
    n: int, d: int, seed: int, max_attempts: int = DEFAULT_PAIRING_ATTEMPTS
) -> TargetGraph:
    """
    Sample a simple d-regular graph from the pairing model.

    Every attempt shuffles n*d stubs and pairs them consecutively; attempts
    producing a loop or a parallel edge are rejected.

    Args:
        n: Vertex count
        d: Degree
        seed: Seed of the generator
        max_attempts: Rejection budget

    Returns:
        TargetGraph: A simple d-regular graph, deterministic per seed

    Raises:
        GraphError: If n*d is odd or d >= n
        GenerationBudgetExceeded: If every attempt was rejected
    """
    if n < 1 or d < 0:
        raise GraphError(f"Infeasible parameters n={n}, d={d}")
    if (n * d) % 2 != 0:
        raise GraphError(f"n * d must be even, got n={n}, d={d}")
    if d >= n:
        raise GraphError(f"Degree must be smaller than the vertex count, got n={n}, d={d}")

    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for attempt in range(1, max_attempts + 1):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        edges: Set[Tuple[int, int]] = set()
        for a, b in pairs.tolist():
            if a == b:
                break
            edge = (a, b) if a < b else (b, a)
            if edge in edges:
                break
            edges.add(edge)
        else:
            logger.debug("Pairing model accepted after %s attempts (n=%s, d=%s)", attempt, n, d)
            return from_edges(n, sorted(edges))
    raise GenerationBudgetExceeded(n, d, max_attempts)


def named_graph(name: str) -> TargetGraph:
    """
    Build one of the built-in graphs.

    Args:
        name: "c{n}", "e{n}", "petersen", "k4" or "k2"

    Returns:
        TargetGraph: The named graph

    Raises:
        GraphError: For an unknown name
    """
    if name == "petersen":
        return from_networkx(nx.petersen_graph())
    if name == "k4":
        return from_networkx(nx.complete_graph(4))
    if name == "k2":
        return from_edges(2, [(0, 1)])
    if name[:1] in ("c", "e") and name[1:].isdigit():
        size = int(name[1:])
        return gen_cycle(size) if name[0] == "c" else gen_empty(size)
    raise GraphError(f"Unknown named graph '{name}'")


def resolve_graph(source: str) -> TargetGraph:
    """
    Resolve a graph source of the run configuration.

    Args:
        source: Named graph, "random:n:d:seed" or "file:<path>"

    Returns:
        TargetGraph: The resolved graph
    """
    if source.startswith("random:"):
        n, d, seed = (int(part) for part in source.split(":")[1:])
        return gen_random_regular(n, d, seed)
    if source.startswith("file:"):
        path = Path(source[len("file:"):])
        try:
            text = path.read_text()
        except OSError as exc:
            raise GraphError(f"Cannot read edge list {path}: {exc}") from exc
        return load_graph(text)
    return named_graph(source)


def _check_vertex(g: TargetGraph, v: int) -> None:
    if not 0 <= v < g.n:
        raise GraphError(f"Invalid vertex id {v} for a graph on {g.n} vertices")


def bfs_distance(g: TargetGraph, u: int, v: int) -> Union[int, float]:
    """
    Shortest-path distance in edges.

    Args:
        g: Target graph
        u: Source vertex
        v: Destination vertex

    Returns:
        Union[int, float]: Edge count of a shortest path, math.inf if
            disconnected

    Raises:
        GraphError: For an invalid vertex id
    """
    _check_vertex(g, u)
    _check_vertex(g, v)
    try:
        return nx.shortest_path_length(g.to_networkx(), u, v)
    except nx.NetworkXNoPath:
        return math.inf


def distance_two_ball(g: TargetGraph, v: int) -> FrozenSet[int]:
    """
    Vertices at distance 1 or 2 from v (v excluded).

    Args:
        g: Target graph
        v: Center vertex

    Returns:
        FrozenSet[int]: The punctured distance-2 ball
    """
    _check_vertex(g, v)
    lengths: Dict[int, int] = nx.single_source_shortest_path_length(g.to_networkx(), v, cutoff=2)
    return frozenset(w for w in lengths if w != v)


def bound_log10(value: int) -> Optional[float]:
    """
    Base-10 logarithm of a non-negative integer bound, rounded to six places.

    Bounds of the form d^(2r) outgrow the decimal conversion limit of int,
    so reports carry their magnitude instead of their digits.

    Args:
        value: The bound

    Returns:
        Optional[float]: log10(value), or None for a zero bound
    """
    if value <= 0:
        return None
    return round(math.log10(value), 6)
