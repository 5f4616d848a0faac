"""
Candidate service.

A star-vertex x in S_v is a candidate with respect to an edge (u, v),
l(u) < l(v), when for every choice of representatives b_i in B_{u_i} of the
upper set {u_1..u_{t-1}} = {w in N^+(u) : l(w) < l(v)}, at least a
1/(t 2^t) fraction of B_u is Maker-connected to all b_i and to x. A
candidate scheme (every member of every B_v a candidate) holds a copy of G
in Maker's graph; extract_embedding finds it.
"""

import logging
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from makerboard.models.board import CandidateScheme, StarVertex
from makerboard.models.exceptions import (
    CandidateConditionError,
    InvariantViolation,
    NoValidImageError,
)
from makerboard.models.graph import Leveling, TargetGraph
from makerboard.services.board_service import GamePosition
from makerboard.services.leveling_service import lower_neighbors, upper_neighbors

logger = logging.getLogger(__name__)


def upper_set(u: int, v: int, g: TargetGraph, l: Leveling) -> List[int]:
    """
    {w in N^+(u) : l(w) < l(v)} sorted by (level, id).

    Args:
        u: Lower endpoint
        v: Upper endpoint
        g: Target graph
        l: Leveling

    Returns:
        List[int]: The upper set; t is its size plus one

    Raises:
        CandidateConditionError: If (u, v) is not an edge with l(u) < l(v)
    """
    if not g.has_edge(u, v) or l.levels[u] >= l.levels[v]:
        raise CandidateConditionError(f"({u}, {v}) is not an edge going up in level")
    return [w for w in upper_neighbors(g, l, u) if l.levels[w] < l.levels[v]]


def meets_threshold(count: Union[int, np.ndarray], t: int, block: int) -> Union[bool, np.ndarray]:
    """
    Exact integer test of count / block >= 1 / (t 2^t), elementwise on arrays.
    """
    return count * t * 2**t >= block


class CandidateChecker:
    """
    Candidate queries over one position, caching Maker adjacency between B sets.

    The cache assumes the position does not change while the checker is in
    use; build a new checker after further claims.
    """

    def __init__(self, pos: GamePosition):
        """
        Initialize the checker.

        Args:
            pos: Game position to audit
        """
        self.pos = pos
        self._matrices: Dict[Tuple[int, int], np.ndarray] = {}
        self._positions: Dict[int, Dict[int, int]] = {}
        self._incidences: Dict[Tuple[int, Tuple[int, ...]], np.ndarray] = {}

    def _index(self, v: int) -> Dict[int, int]:
        if v not in self._positions:
            self._positions[v] = {idx: pos for pos, idx in enumerate(self.pos.B[v])}
        return self._positions[v]

    def row(self, x: StarVertex, u: int) -> np.ndarray:
        """
        Maker adjacency of x towards B_u.

        Args:
            x: Star-vertex
            u: Vertex with determined B_u

        Returns:
            np.ndarray: Boolean vector over B_u
        """
        index = self._index(u)
        row = np.zeros(len(index), dtype=bool)
        for nb in self.pos.maker_neighbors(x):
            if nb.vertex == u and nb.index in index:
                row[index[nb.index]] = True
        return row

    def matrix(self, a: int, b: int) -> np.ndarray:
        """
        Maker adjacency between B_a (rows) and B_b (columns), cached.
        """
        key = (a, b)
        if key not in self._matrices:
            rows = [self.row(x, b) for x in self.pos.B_vertices(a)]
            width = len(self.pos.B[b])
            self._matrices[key] = np.array(rows, dtype=bool).reshape(len(rows), width)
        return self._matrices[key]

    def tuple_incidence(self, u: int, upper: List[int]) -> np.ndarray:
        """
        Members of B_u Maker-connected to every tuple of representatives.

        Rows enumerate B_{u_1} x ... x B_{u_k} in lexicographic order of
        positions, the last upper vertex varying fastest.

        Args:
            u: Lower endpoint
            upper: Upper set of the edge

        Returns:
            np.ndarray: Boolean matrix, one row per tuple, one column per member of B_u
        """
        key = (u, tuple(upper))
        if key not in self._incidences:
            width = len(self.pos.B[u])
            hyper = np.ones((1, width), dtype=bool)
            for w in upper:
                adjacency = self.matrix(w, u)
                hyper = (hyper[:, None, :] & adjacency[None, :, :]).reshape(-1, width)
            self._incidences[key] = hyper
        return self._incidences[key]

    def tuple_counts(self, row: np.ndarray, u: int, upper: List[int]) -> np.ndarray:
        """
        Per tuple of representatives, the members of B_u selected by row and
        Maker-connected to the whole tuple.

        Args:
            row: Boolean selector over B_u
            u: Lower endpoint
            upper: Upper set of the edge

        Returns:
            np.ndarray: One count per tuple
        """
        return (self.tuple_incidence(u, upper) & row[None, :]).sum(axis=1)

    def is_candidate_wrt_edge(self, x: StarVertex, u: int, v: int) -> bool:
        """
        Candidate test of x with respect to the edge (u, v).

        Args:
            x: Star-vertex of S_v
            u: Lower endpoint
            v: Upper endpoint

        Returns:
            bool: True iff every tuple clears the 1/(t 2^t) threshold

        Raises:
            CandidateConditionError: If B_u or some B_{u_i} is undetermined
        """
        pos = self.pos
        if x.vertex != v:
            raise CandidateConditionError(f"{x} does not lie in S_{v}")
        upper = upper_set(u, v, pos.graph, pos.leveling)
        missing = [w for w in [u] + upper if not pos.b_determined(w)]
        if missing:
            raise CandidateConditionError(f"B sets of {missing} are not determined")
        t = len(upper) + 1
        block = len(pos.B[u])
        counts = self.tuple_counts(self.row(x, u), u, upper)
        return bool(np.all(meets_threshold(counts, t, block)))

    def is_candidate(self, x: StarVertex) -> bool:
        """
        Candidate test of x against every edge from N^-(v).
        """
        pos = self.pos
        return all(
            self.is_candidate_wrt_edge(x, u, x.vertex)
            for u in lower_neighbors(pos.graph, pos.leveling, x.vertex)
        )


def is_candidate_wrt_edge(pos: GamePosition, x: StarVertex, u: int, v: int) -> bool:
    """
    Candidate test of x in S_v with respect to the edge (u, v).

    Args:
        pos: Game position
        x: Star-vertex of S_v
        u: Lower endpoint
        v: Upper endpoint

    Returns:
        bool: The candidate verdict
    """
    return CandidateChecker(pos).is_candidate_wrt_edge(x, u, v)


def is_candidate(pos: GamePosition, x: StarVertex) -> bool:
    """
    Candidate test of x in B_v; vacuously true when N^-(v) is empty.
    """
    return CandidateChecker(pos).is_candidate(x)


def scheme_of(pos: GamePosition) -> CandidateScheme:
    """
    Collect the B sets and level order of a position.

    Raises:
        CandidateConditionError: If some B_v is undetermined
    """
    missing = [v for v in range(pos.graph.n) if not pos.b_determined(v)]
    if missing:
        raise CandidateConditionError(f"B sets of {missing} are not determined")
    return CandidateScheme(
        B=tuple(pos.B[v] for v in range(pos.graph.n)),
        order=tuple(pos.leveling.order()),
    )


def verify_scheme(pos: GamePosition, scheme: Optional[CandidateScheme] = None) -> bool:
    """
    Check that every member of every B_v is a candidate.

    Candidacy is read off the B sets of pos, so a given scheme must hold
    exactly those sets in the level order of pos.

    Args:
        pos: Finished game position
        scheme: Scheme to check; defaults to the B sets of pos

    Returns:
        bool: True iff the B sets form a candidate scheme

    Raises:
        CandidateConditionError: If the scheme disagrees with the position
    """
    if any(not pos.b_determined(v) for v in range(pos.graph.n)):
        return False
    own = scheme_of(pos)
    if scheme is not None and scheme != own:
        raise CandidateConditionError("Scheme does not match the B sets of the position")
    scheme = own
    checker = CandidateChecker(pos)
    for v in scheme.order:
        for index in scheme.B[v]:
            if not checker.is_candidate(StarVertex(v, index)):
                logger.debug("v%s#%s is not a candidate", v, index)
                return False
    return True


def extract_embedding(
    pos: GamePosition, scheme: CandidateScheme, g: TargetGraph, l: Leveling
) -> List[StarVertex]:
    """
    Find a copy of G in Maker's graph from a verified candidate scheme.

    Vertices are placed in decreasing level order (ties by id); the image of
    u is the lowest-index member of B_u Maker-connected to the images of
    all of N^+(u).

    Args:
        pos: Finished game position
        scheme: Verified candidate scheme
        g: Target graph
        l: Leveling

    Returns:
        List[StarVertex]: Image of every vertex of G

    Raises:
        NoValidImageError: If some vertex has no admissible image
        InvariantViolation: If the result fails the independent check
    """
    images: Dict[int, StarVertex] = {}
    for u in sorted(range(g.n), key=lambda w: (-l.levels[w], w)):
        anchors = [images[w] for w in upper_neighbors(g, l, u)]
        image = next(
            (
                StarVertex(u, index)
                for index in scheme.B[u]
                if all(pos.maker_holds(StarVertex(u, index), a) for a in anchors)
            ),
            None,
        )
        if image is None:
            raise NoValidImageError(u)
        images[u] = image

    embedding = [images[v] for v in range(g.n)]
    if not verify_embedding(pos, g, embedding):
        raise InvariantViolation("Extracted embedding fails the Maker ledger check")
    return embedding


def verify_embedding(pos: GamePosition, g: TargetGraph, embedding: List[StarVertex]) -> bool:
    """
    Independent check: injective, images in their blocks, every edge Maker's.

    Args:
        pos: Game position
        g: Target graph
        embedding: Image of every vertex

    Returns:
        bool: True iff the map is a copy of G in Maker's graph
    """
    if len(embedding) != g.n or len(set(embedding)) != g.n:
        return False
    if any(image.vertex != v for v, image in enumerate(embedding)):
        return False
    for u, v in g.edges():
        a, b = embedding[u], embedding[v]
        edge = (a, b) if pos.leveling.levels[u] < pos.leveling.levels[v] else (b, a)
        if edge not in pos.maker_edges:
            return False
    return True
