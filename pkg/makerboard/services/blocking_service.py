"""
Blocking graph service.

u blocks v when l(u) < l(v) and either (u, v) is an edge of G, or some
common neighbor w of u and v sits below both. D has an arc v -> u for every
u blocking v; P(v) is the set of vertices reachable from v.
"""

import logging
from typing import List, Set

from makerboard.models.graph import BlockingDag, DagBoundsReport, Leveling, TargetGraph
from makerboard.services.graph_service import bound_log10, distance_two_ball
from makerboard.services.leveling_service import check_leveling, upper_neighbors

logger = logging.getLogger(__name__)


def build_blocking_dag(g: TargetGraph, l: Leveling) -> BlockingDag:
    """
    Build D and the descendant sets P(v).

    Args:
        g: Target graph
        l: Valid leveling of g

    Returns:
        BlockingDag: Arcs and descendant bitsets

    Raises:
        LevelingError: If the leveling is invalid for g
    """
    check_leveling(g, l)
    out: List[Set[int]] = [set() for _ in range(g.n)]

    for u, v in g.edges():
        low, high = (u, v) if l.levels[u] < l.levels[v] else (v, u)
        out[high].add(low)

    # Neighbors of w are pairwise within distance 2, so their levels differ.
    for w in range(g.n):
        above = upper_neighbors(g, l, w)
        for i, low in enumerate(above):
            for high in above[i + 1:]:
                out[high].add(low)

    descendants = [0] * g.n
    for v in l.order():
        bits = 0
        for u in out[v]:
            bits |= (1 << u) | descendants[u]
        descendants[v] = bits

    dag = BlockingDag(
        arcs=tuple(tuple(sorted(arcs)) for arcs in out),
        descendants=tuple(descendants),
    )
    logger.debug("Blocking graph built with %s arcs", sum(len(a) for a in dag.arcs))
    return dag


def ball_sizes(g: TargetGraph) -> List[int]:
    """
    d_{<=2}(v) for every vertex: the number of vertices within distance 2.

    Args:
        g: Target graph

    Returns:
        List[int]: Ball size per vertex
    """
    return [len(distance_two_ball(g, v)) for v in range(g.n)]


def check_dag_bounds(dag: BlockingDag, g: TargetGraph, l: Leveling) -> DagBoundsReport:
    """
    Compare D against the out-degree bound d^2 and the descendant bound (d^2)^r.

    Args:
        dag: Blocking graph built from (g, l)
        g: Target graph
        l: Leveling

    Returns:
        DagBoundsReport: Observed maxima, bounds and the verdict
    """
    out_degrees = [dag.out_degree(v) for v in range(g.n)]
    max_out = max(out_degrees, default=0)
    max_desc = max((dag.descendant_count(v) for v in range(g.n)), default=0)
    out_bound = g.d * g.d
    desc_bound = out_bound**l.r
    ball_ok = all(deg <= size for deg, size in zip(out_degrees, ball_sizes(g)))
    return DagBoundsReport(
        max_out_degree=max_out,
        max_descendants=max_desc,
        out_degree_bound=out_bound,
        descendant_bound_log10=bound_log10(desc_bound),
        ball_bound_ok=ball_ok,
        passed=max_out <= out_bound and max_desc <= desc_bound and ball_ok,
    )
