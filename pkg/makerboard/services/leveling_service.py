"""
Leveling service.

This module labels the vertices of G with levels such that two vertices on
the same level are at distance at least 3. Two producers are offered: a
resampling procedure over uniform random levels in {1..ceil(e d^8)} and a
greedy colouring of the square of G.
"""

import logging
import math
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from makerboard.models.exceptions import LevelingError, ResampleBudgetExceeded
from makerboard.models.graph import Leveling, LllCondition, TargetGraph
from makerboard.services.graph_service import distance_two_ball

logger = logging.getLogger(__name__)

DEFAULT_RESAMPLE_CAP = 100_000


def level_range(d: int) -> int:
    """
    Level range ceil(e * d^8) of the random labeling.

    Args:
        d: Degree, at least 1

    Returns:
        int: The level range r
    """
    if d < 1:
        raise LevelingError(f"level_range needs d >= 1, got {d}")
    return math.ceil(math.e * d**8)


def lll_condition(d: int, r: int) -> LllCondition:
    """
    Evaluate the Local Lemma condition e * p * (k + 1) <= 1.

    A bad event at v (a repeated level inside the distance-2 ball of v) has
    probability at most p = (d + d^2) / r and depends on at most
    k = d + d^2 + d^3 + d^4 other bad events.

    Args:
        d: Degree
        r: Level range

    Returns:
        LllCondition: p, k and whether the condition holds
    """
    p = (d + d * d) / r
    k = d + d**2 + d**3 + d**4
    return LllCondition(d=d, r=r, p=p, k=k, satisfied=math.e * p * (k + 1) <= 1)


def level_lll(
    g: TargetGraph,
    seed: int,
    r: Optional[int] = None,
    resample_cap: int = DEFAULT_RESAMPLE_CAP,
) -> Leveling:
    """
    Random leveling repaired by resampling.

    Levels start uniform in {1..r}. While some vertex v sees its own level
    inside its distance-2 ball (scanned in ascending id), the levels of v
    and of its whole ball are drawn again.

    Args:
        g: Target graph
        seed: Generator seed
        r: Level range, defaults to level_range(d)
        resample_cap: Maximum number of resamples

    Returns:
        Leveling: A valid leveling, deterministic per seed

    Raises:
        ResampleBudgetExceeded: If the cap is reached
    """
    r = r if r is not None else level_range(max(g.d, 1))
    rng = np.random.default_rng(seed)
    levels = rng.integers(1, r + 1, size=g.n)
    balls = [sorted(distance_two_ball(g, v)) for v in range(g.n)]

    resamples = 0
    while True:
        bad = next(
            (v for v in range(g.n) if any(levels[w] == levels[v] for w in balls[v])),
            None,
        )
        if bad is None:
            break
        if resamples >= resample_cap:
            raise ResampleBudgetExceeded(resample_cap)
        variables = [bad] + balls[bad]
        levels[variables] = rng.integers(1, r + 1, size=len(variables))
        resamples += 1

    logger.debug("Random leveling settled after %s resamples (r=%s)", resamples, r)
    return Leveling(levels=tuple(int(level) for level in levels), r=r)


def level_greedy(g: TargetGraph) -> Leveling:
    """
    Greedy proper colouring of the square of G in vertex-id order.

    Args:
        g: Target graph

    Returns:
        Leveling: Levels 1..r with r <= d^2 + 1
    """
    square = nx.power(g.to_networkx(), 2)
    colors = nx.coloring.greedy_color(square, strategy=lambda graph, _colors: sorted(graph))
    levels = tuple(colors[v] + 1 for v in range(g.n))
    return Leveling(levels=levels, r=max(levels, default=1))


def validate_leveling(g: TargetGraph, l: Leveling) -> List[Tuple[int, int]]:
    """
    List same-level pairs closer than distance 3.

    Args:
        g: Target graph
        l: Leveling covering all vertices

    Returns:
        List[Tuple[int, int]]: Violating pairs (u, v) with u < v, empty iff valid
    """
    violations = []
    for v in range(g.n):
        for w in sorted(distance_two_ball(g, v)):
            if w > v and l.levels[w] == l.levels[v]:
                violations.append((v, w))
    return violations


def check_leveling(g: TargetGraph, l: Leveling) -> None:
    """
    Raise unless the leveling is a valid leveling of g.

    Args:
        g: Target graph
        l: Leveling to check

    Raises:
        LevelingError: On size mismatch, out-of-range levels or violations
    """
    if len(l.levels) != g.n:
        raise LevelingError(f"Leveling covers {len(l.levels)} vertices, graph has {g.n}")
    out_of_range = [v for v, level in enumerate(l.levels) if not 1 <= level <= l.r]
    if out_of_range:
        raise LevelingError(f"Levels outside [1, {l.r}] at vertices {out_of_range}")
    violations = validate_leveling(g, l)
    if violations:
        raise LevelingError(f"Same-level pairs within distance 2: {violations}")


def lower_neighbors(g: TargetGraph, l: Leveling, v: int) -> List[int]:
    """
    N^-(v): neighbors on a lower level, sorted by (level, id).
    """
    return sorted(
        (u for u in g.neighbors(v) if l.levels[u] < l.levels[v]),
        key=lambda u: (l.levels[u], u),
    )


def upper_neighbors(g: TargetGraph, l: Leveling, v: int) -> List[int]:
    """
    N^+(v): neighbors on a higher level, sorted by (level, id).
    """
    return sorted(
        (u for u in g.neighbors(v) if l.levels[u] > l.levels[v]),
        key=lambda u: (l.levels[u], u),
    )


def parse_leveling(text: str, n: int) -> Leveling:
    """
    Parse "vertex level" lines; blank lines and "#" comments are skipped.

    Args:
        text: Serialized leveling
        n: Vertex count

    Returns:
        Leveling: Levels with r set to the largest level

    Raises:
        LevelingError: On malformed lines or missing vertices
    """
    levels: List[Optional[int]] = [None] * n
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or not all(part.isdigit() for part in parts):
            raise LevelingError(f"Line {line_number}: expected 'vertex level', got '{line}'")
        v, level = int(parts[0]), int(parts[1])
        if not 0 <= v < n:
            raise LevelingError(f"Line {line_number}: vertex {v} out of range")
        levels[v] = level
    missing = [v for v, level in enumerate(levels) if level is None]
    if missing:
        raise LevelingError(f"No level given for vertices {missing}")
    complete = tuple(int(level) for level in levels if level is not None)
    return Leveling(levels=complete, r=max(complete, default=1))
