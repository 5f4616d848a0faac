"""
Maker strategy service.

Maker plays the G-game on H by splitting it into local subgames. A vertex v
becomes ready once every out-neighbor in the blocking graph is completed;
Maker then fixes B_v (s untouched star-vertices of S_v) and opens one
subgame G_{u,x} for every u in N^-(v) and x in B_v, played on the s edges
between B_u and x. Winning G_{u,x} makes x a candidate with respect to
(u, v); v is completed once all its subgames are won.

Every Breaker move is answered by exactly one Maker move:

* Case 1, the upper endpoint v is ready but not completed: answer in the
  subgame the Breaker edge belongs to, else in the first unfinished
  subgame of v.
* Case 2, v is not ready: answer in the first ready, not completed vertex
  of P(v) in (level, id) order.
* Case 3, v is completed (and Breaker passes): answer in the lowest-id
  vertex that is not completed, descending into its P set when it is not
  ready yet.
"""

import logging
import math
from collections import deque
from typing import Callable, Deque, Dict, List, Optional, Tuple

import numpy as np

from makerboard.models.board import BoardSpec, Player, StarEdge, StarVertex, format_edge
from makerboard.models.exceptions import (
    HyperedgeTooSmallError,
    InvariantViolation,
    NoSubgameAvailable,
)
from makerboard.models.game import AuditEntry, CaseTag, Outcome, TranscriptEvent
from makerboard.models.graph import BlockingDag, Leveling, TargetGraph
from makerboard.services.board_service import GamePosition
from makerboard.services.breaker_service import BreakerPolicy, next_breaker_edge
from makerboard.services.candidate_service import (
    CandidateChecker,
    extract_embedding,
    meets_threshold,
    scheme_of,
    upper_set,
    verify_scheme,
)
from makerboard.services.discrepancy_service import HypergraphGame, PairingGame, quota
from makerboard.services.leveling_service import lower_neighbors

logger = logging.getLogger(__name__)

Recorder = Callable[[TranscriptEvent], None]

_QUOTA_MARGIN = 1e-9


def init_game(g: TargetGraph, l: Leveling, dag: BlockingDag, spec: BoardSpec) -> GamePosition:
    """
    Fresh position with B_v = S_v for the vertices of out-degree zero.

    Those vertices have no lower neighbors, so they start completed (and
    ready); every other B set is undetermined.

    Args:
        g: Target graph
        l: Leveling
        dag: Blocking graph
        spec: Board specification

    Returns:
        GamePosition: The initial position
    """
    pos = GamePosition(g, l, dag, spec)
    for v in range(g.n):
        if dag.out_degree(v) == 0:
            pos.set_B(v, tuple(range(spec.block_sizes[v])))
            pos.ready[v] = True
            pos.completed[v] = True
    return pos


def select_B(pos: GamePosition, v: int) -> Tuple[int, ...]:
    """
    Fix B_v as the s lowest-index untouched star-vertices of S_v.

    Args:
        pos: Game position
        v: Vertex that just became ready

    Returns:
        Tuple[int, ...]: The chosen block indices

    Raises:
        InvariantViolation: If fewer than s star-vertices are untouched
    """
    s = pos.spec.s
    if pos.untouched_in(v) < s:
        raise InvariantViolation(
            f"S_{v} has {pos.untouched_in(v)} untouched star-vertices when it becomes ready, "
            f"needs {s}"
        )
    touched = pos.touched[v]
    chosen: List[int] = []
    index = 0
    while len(chosen) < s:
        if index not in touched:
            chosen.append(index)
        index += 1
    pos.set_B(v, tuple(chosen))
    return tuple(chosen)


def check_s_guarantee(d: int, s: int) -> bool:
    """
    Check that the engine quota covers the candidate threshold for every t.

    For t in 2..d the smallest subgame hyperedge has s / (2^t (t - 1))
    vertices halved, there are at most s^(t-1) hyperedges, and the quota
    must reach s / (2^t t).

    Args:
        d: Degree, at least 1
        s: Block parameter

    Returns:
        bool: True iff the inequality holds for every t (vacuous for d = 1)
    """
    for t in range(2, d + 1):
        half = s / (2**t * (t - 1))
        log_term = math.log(2) + (t - 1) * math.log(s)
        if half - math.sqrt(half * log_term) < s / (2**t * t) - _QUOTA_MARGIN:
            return False
    return True


def default_round_cap(g: TargetGraph, dag: BlockingDag, s: int) -> int:
    """
    4 * sum over v of d * s^2 * (|P(v)| + 1).
    """
    total = sum(g.d * s * s * (dag.descendant_count(v) + 1) for v in range(g.n))
    return max(1, 4 * total)


class SubgameState:
    """
    One subgame G_{u,x}: the s edges between B_u and x.

    Position p of the underlying game stands for the edge (B_u[p], x).

    Attributes:
        u: Lower vertex
        x: Star-vertex of B_v
        t: One plus the size of the upper set of (u, v)
        block: B_u
        game: Pairing game (t = 1) or hypergraph game (t >= 2)
        moves: Maker moves made in this subgame
        finished: Won or exhausted
        won: Goal reached
    """

    def __init__(
        self, u: int, x: StarVertex, t: int, block: Tuple[int, ...], game: HypergraphGame
    ):
        """
        Initialize the subgame state.
        """
        self.u = u
        self.x = x
        self.t = t
        self.block = block
        self.game = game
        self.positions = {index: p for p, index in enumerate(block)}
        self.moves = 0
        self.finished = False
        self.won = False

    @property
    def label(self) -> str:
        """
        "v{u}|v{v}#{idx}".
        """
        return f"v{self.u}|{self.x}"

    @property
    def exhausted(self) -> bool:
        """
        No unclaimed edge left.
        """
        return self.game.unclaimed_count == 0

    def edge_at(self, p: int) -> StarEdge:
        """
        Board edge of game position p.
        """
        return (StarVertex(self.u, self.block[p]), self.x)

    def position_of(self, edge: StarEdge) -> Optional[int]:
        """
        Game position of a normalized board edge, None if outside this subgame.
        """
        lower, upper = edge
        if upper != self.x or lower.vertex != self.u:
            return None
        return self.positions.get(lower.index)


def open_subgame(
    pos: GamePosition, u: int, x: StarVertex, checker: Optional[CandidateChecker] = None
) -> SubgameState:
    """
    Create G_{u,x} for x in B_v and u in N^-(v).

    For t >= 2 the hyperedges are indexed by the tuples of representatives
    of the upper set; the hyperedge of a tuple holds the edges (b, x) with b
    Maker-connected to the whole tuple, frozen at creation.

    Args:
        pos: Game position with B_u and the upper B sets determined
        u: Lower vertex
        x: Star-vertex of B_v
        checker: Checker to share adjacency caches between subgames

    Returns:
        SubgameState: The fresh subgame

    Raises:
        InvariantViolation: If t exceeds d
        HyperedgeTooSmallError: If a hyperedge is smaller than the candidates of
            the upper set promise
    """
    g, l = pos.graph, pos.leveling
    upper = upper_set(u, x.vertex, g, l)
    t = len(upper) + 1
    if t > max(g.d, 1):
        raise InvariantViolation(f"Subgame v{u}|{x} has t = {t} > d = {g.d}")
    block = pos.B[u]
    s = len(block)
    if t == 1:
        return SubgameState(u, x, t, block, PairingGame(s))

    checker = checker or CandidateChecker(pos)
    incidence = checker.tuple_incidence(u, upper)
    smallest = int(incidence.sum(axis=1).min())
    if smallest * (t - 1) * 2 ** (t - 1) < s:
        raise HyperedgeTooSmallError(f"v{u}|{x}", smallest, s / ((t - 1) * 2 ** (t - 1)))
    return SubgameState(u, x, t, block, HypergraphGame(s, incidence))


def subgame_win_check(state: SubgameState) -> bool:
    """
    Check the goal of a subgame: x becomes a candidate with respect to (u, v).

    Args:
        state: Subgame state

    Returns:
        bool: t = 1: Maker holds at least half of the s edges; t >= 2: every
            hyperedge has maker_count * t * 2^t >= s
    """
    s = len(state.block)
    counts = state.game.maker_counts
    if state.t == 1:
        return int(counts[0]) * 2 >= s
    return bool(np.all(meets_threshold(counts, state.t, s)))


class MakerStrategy:
    """
    Maker's global strategy with its bookkeeping.

    The strategy owns the position. Callers feed it Breaker moves through
    play_round; every call performs exactly one Maker move (or ends the
    game).
    """

    def __init__(
        self,
        g: TargetGraph,
        l: Leveling,
        dag: BlockingDag,
        spec: BoardSpec,
        recorder: Optional[Recorder] = None,
    ):
        """
        Initialize the strategy and fix the B sets that are ready at the start.

        Args:
            g: Target graph
            l: Leveling
            dag: Blocking graph
            spec: Board specification
            recorder: Callback receiving one event per move
        """
        self.graph = g
        self.leveling = l
        self.dag = dag
        self.spec = spec
        self.recorder = recorder
        self.pos = init_game(g, l, dag, spec)

        self.subgames: Dict[Tuple[int, StarVertex], SubgameState] = {}
        self.pending: Dict[int, Deque[Tuple[int, StarVertex]]] = {v: deque() for v in range(g.n)}
        self.remaining = [0] * g.n
        self.entered: Dict[Tuple[int, StarVertex], SubgameState] = {}
        self.attribution: Dict[StarVertex, int] = {}
        self.audit: List[AuditEntry] = []
        self.ready_round: List[Optional[int]] = [None] * g.n
        self.completed_round: List[Optional[int]] = [None] * g.n
        self.subgame_moves = [0] * g.n
        self.invariant_violations = 0
        self.attribution_violations = 0
        self.quota_violations = 0
        self.length_violations = 0
        self.lost: Optional[SubgameState] = None

        self._predecessors = [dag.predecessors(v) for v in range(g.n)]
        self._descent = [
            sorted(dag.descendant_set(v), key=lambda w: (l.levels[w], w)) for v in range(g.n)
        ]
        self._completable: List[int] = []
        self._length_bounds = [len(lower_neighbors(g, l, v)) * spec.s * spec.s for v in range(g.n)]

        for v in range(g.n):
            if self.pos.completed[v]:
                self._record_audit(v, 0)
                self.ready_round[v] = 0
                self.completed_round[v] = 0
        for v in range(g.n):
            if self.pos.completed[v]:
                self._wake_predecessors(v, 0)
        self._refresh(0)

    @property
    def done(self) -> bool:
        """
        Every vertex is completed.
        """
        return all(self.pos.completed)

    def ready_not_completed(self) -> List[int]:
        """
        Ready vertices still playing their subgames, in id order.
        """
        pos = self.pos
        return [v for v in range(self.graph.n) if pos.ready[v] and not pos.completed[v]]

    def first_unfinished(self, v: int) -> Optional[SubgameState]:
        """
        First unfinished subgame of v in (u, x) order.
        """
        queue = self.pending[v]
        while queue and self.subgames[queue[0]].finished:
            queue.popleft()
        return self.subgames[queue[0]] if queue else None

    def frontier(self) -> List[SubgameState]:
        """
        Unfinished subgames Breaker can attack next: the first one of every
        ready vertex plus those Breaker already entered.
        """
        states: Dict[Tuple[int, StarVertex], SubgameState] = {}
        for v in self.ready_not_completed():
            state = self.first_unfinished(v)
            if state is not None:
                states[(state.u, state.x)] = state
        for key, state in self.entered.items():
            if not state.finished:
                states[key] = state
        return [states[key] for key in sorted(states)]

    def subgame_of(self, edge: StarEdge) -> Optional[SubgameState]:
        """
        Subgame whose board contains a normalized edge, if any.
        """
        lower, upper = edge
        state = self.subgames.get((lower.vertex, upper))
        if state is None or state.position_of(edge) is None:
            return None
        return state

    def _descend(self, v: int) -> Optional[int]:
        """
        v itself when ready and not completed, else the first such vertex of P(v).
        """
        pos = self.pos
        if pos.ready[v] and not pos.completed[v]:
            return v
        return next((w for w in self._descent[v] if pos.ready[w] and not pos.completed[w]), None)

    def _fallback_target(self) -> SubgameState:
        pos = self.pos
        v = next((w for w in range(self.graph.n) if not pos.completed[w]), None)
        if v is None:
            raise NoSubgameAvailable()
        w = self._descend(v)
        state = self.first_unfinished(w) if w is not None else None
        if state is None:
            raise InvariantViolation(f"No ready vertex to play for v{v}")
        return state

    def _case_of(self, edge: Optional[StarEdge]) -> CaseTag:
        if edge is None:
            return "pass"
        v = edge[1].vertex
        if self.pos.completed[v]:
            return "case3"
        return "case1" if self.pos.ready[v] else "case2"

    def dispatch(
        self, edge: Optional[StarEdge], owner: Optional[SubgameState]
    ) -> Tuple[CaseTag, SubgameState]:
        """
        Choose the subgame that answers a Breaker move.

        Args:
            edge: Normalized Breaker edge, None for a pass
            owner: Subgame the Breaker edge was recorded into

        Returns:
            Tuple[CaseTag, SubgameState]: Case tag and the answering subgame

        Raises:
            NoSubgameAvailable: If every vertex is completed
            InvariantViolation: If Case 2 finds no ready descendant
        """
        pos = self.pos
        if edge is None:
            return "pass", self._fallback_target()
        v = edge[1].vertex
        if pos.completed[v]:
            return "case3", self._fallback_target()
        if pos.ready[v]:
            if owner is not None and not owner.finished:
                return "case1", owner
            state = self.first_unfinished(v)
            if state is None:
                raise InvariantViolation(f"v{v} is ready but has no unfinished subgame")
            return "case1", state
        w = self._descend(v)
        state = self.first_unfinished(w) if w is not None else None
        if state is None:
            raise InvariantViolation(f"No ready, not completed vertex in P(v{v})")
        return "case2", state

    def opening_move(self) -> None:
        """
        Maker's extra first move when Maker starts: a phantom move in the
        subgame a Breaker pass would be answered in.
        """
        if self.done:
            return
        state = self._fallback_target()
        self._maker_move(state, 0, "opening")
        self._refresh(0)

    def play_round(self, edge: Optional[StarEdge], round_number: int) -> None:
        """
        Apply a Breaker move and answer it.

        Args:
            edge: Breaker edge in any orientation, None for a pass
            round_number: Current round

        Raises:
            NotABoardEdgeError: If the Breaker edge is not in H
            AlreadyClaimedError: If the Breaker edge is taken
        """
        pos = self.pos
        owner: Optional[SubgameState] = None
        first_touch: Optional[StarVertex] = None
        claimed: Optional[StarEdge] = None
        if edge is not None:
            upper_before = pos.normalize(edge)[1]
            if not pos.is_touched(upper_before):
                first_touch = upper_before
            claimed = pos.claim(Player.BREAKER, edge)
            owner = self._record_breaker(claimed)

        if self.lost is not None:
            self._emit(round_number, Player.BREAKER, claimed, owner, self._case_of(claimed))
            return
        case, state = self.dispatch(claimed, owner)
        self._emit(round_number, Player.BREAKER, claimed, owner, case)
        if first_touch is not None:
            self.attribution[first_touch] = state.x.vertex
        self._maker_move(state, round_number, case)
        self._refresh(round_number)

    def _record_breaker(self, edge: StarEdge) -> Optional[SubgameState]:
        state = self.subgame_of(edge)
        if state is None:
            return None
        p = state.position_of(edge)
        if p is not None and state.game.is_free(p):
            state.game.claim(p, Player.BREAKER)
            self.entered[(state.u, state.x)] = state
            if not state.finished and state.exhausted:
                self._finish(state)
        return state

    def _maker_move(self, state: SubgameState, round_number: int, case: CaseTag) -> None:
        p = state.game.maker_move()
        edge = self.pos.claim(Player.MAKER, state.edge_at(p))
        state.game.claim(p, Player.MAKER)
        state.moves += 1
        self.subgame_moves[state.x.vertex] += 1
        self._emit(round_number, Player.MAKER, edge, state, case)
        if subgame_win_check(state) or state.exhausted:
            self._finish(state)

    def _finish(self, state: SubgameState) -> None:
        state.finished = True
        state.won = subgame_win_check(state)
        game = state.game
        if state.exhausted and game.X:
            floor = quota(game.x, game.X) - _QUOTA_MARGIN
            below = int(np.count_nonzero(game.maker_counts < floor))
            if below:
                logger.warning("Subgame %s: %s hyperedges below quota", state.label, below)
                self.quota_violations += below
        if not state.won:
            logger.warning("Subgame %s exhausted without reaching its goal", state.label)
            self.lost = self.lost or state
            return
        v = state.x.vertex
        self.remaining[v] -= 1
        if self.remaining[v] == 0:
            self._completable.append(v)

    def _refresh(self, round_number: int) -> None:
        """
        Complete vertices whose subgames are all won and make their
        predecessors ready, to a fixpoint.
        """
        while self._completable:
            v = self._completable.pop(0)
            self.pos.completed[v] = True
            self.completed_round[v] = round_number
            logger.debug("v%s completed in round %s", v, round_number)
            self._check_length(v)
            self._wake_predecessors(v, round_number)

    def _check_length(self, v: int) -> None:
        # G_v is played on at most |N^-(v)| * s^2 board edges.
        moves, bound = self.subgame_moves[v], self._length_bounds[v]
        if moves > bound:
            logger.warning("G_v%s took %s Maker moves, more than %s", v, moves, bound)
            self.length_violations += 1

    def _wake_predecessors(self, v: int, round_number: int) -> None:
        pos = self.pos
        for w in self._predecessors[v]:
            if pos.ready[w] or not all(pos.completed[u] for u in self.dag.arcs[w]):
                continue
            self._become_ready(w, round_number)

    def _become_ready(self, v: int, round_number: int) -> None:
        pos = self.pos
        pos.ready[v] = True
        self.ready_round[v] = round_number
        entry = self._record_audit(v, round_number)
        if not entry.invariant_ok:
            raise InvariantViolation(
                f"v{v} became ready with {entry.untouched} untouched star-vertices, "
                f"needs {self.spec.s}"
            )
        select_B(pos, v)
        logger.debug("v%s ready in round %s, B fixed", v, round_number)

        checker = CandidateChecker(pos)
        for u in sorted(lower_neighbors(self.graph, self.leveling, v)):
            for x in pos.B_vertices(v):
                state = open_subgame(pos, u, x, checker)
                self.subgames[(u, x)] = state
                self.pending[v].append((u, x))
        self.remaining[v] = len(self.pending[v])
        if self.remaining[v] == 0:
            self._completable.append(v)

    def _record_audit(self, v: int, round_number: int) -> AuditEntry:
        pos = self.pos
        s = self.spec.s
        touched = sorted(pos.touched[v])
        descendants = self.dag.descendant_set(v)
        bound = self.graph.d * s * s
        per_owner: Dict[int, int] = {}
        attribution_ok = True
        for index in touched:
            owner = self.attribution.get(StarVertex(v, index))
            if owner is None or owner not in descendants:
                attribution_ok = False
                continue
            per_owner[owner] = per_owner.get(owner, 0) + 1
        if any(count > bound for count in per_owner.values()):
            attribution_ok = False

        untouched = pos.untouched_in(v)
        entry = AuditEntry(
            vertex=v,
            round=round_number,
            untouched=untouched,
            touched=len(touched),
            touched_bound=bound * len(descendants),
            invariant_ok=untouched >= s,
            attribution_ok=attribution_ok,
        )
        if not entry.invariant_ok:
            self.invariant_violations += 1
            logger.warning("Untouched reserve fails at v%s: %s untouched < %s", v, untouched, s)
        if not attribution_ok:
            self.attribution_violations += 1
            logger.warning("Attribution audit fails at v%s", v)
        self.audit.append(entry)
        return entry

    def _emit(
        self,
        round_number: int,
        player: Player,
        edge: Optional[StarEdge],
        state: Optional[SubgameState],
        case: CaseTag,
    ) -> None:
        if self.recorder is None:
            return
        self.recorder(
            TranscriptEvent(
                round=round_number,
                player=player,
                edge=format_edge(edge) if edge is not None else None,
                subgame=state.label if state is not None else None,
                case=case,
            )
        )


def run_game(
    g: TargetGraph,
    l: Leveling,
    dag: BlockingDag,
    spec: BoardSpec,
    breaker: BreakerPolicy,
    round_cap: Optional[int] = None,
    maker_first: bool = False,
    recorder: Optional[Recorder] = None,
) -> Outcome:
    """
    Play the G-game to the end.

    Rounds are a Breaker move followed by Maker's answer. The game ends
    when every vertex is completed (Maker wins), when a subgame is lost or
    when the round cap is reached.

    Args:
        g: Target graph
        l: Leveling
        dag: Blocking graph
        spec: Board specification
        breaker: Breaker policy
        round_cap: Maximum number of rounds, defaults to default_round_cap
        maker_first: Maker opens with an extra move
        recorder: Callback receiving one event per move

    Returns:
        Outcome: Winner, counters, audit trail and, on a win, the embedding

    Raises:
        InvariantViolation: If the untouched reserve or the end-of-game audit fails
    """
    cap = round_cap if round_cap is not None else default_round_cap(g, dag, spec.s)
    strategy = MakerStrategy(g, l, dag, spec, recorder)
    breaker.attach(strategy)
    logger.info("Game started: n=%s d=%s s=%s round cap %s", g.n, g.d, spec.s, cap)

    if maker_first:
        strategy.opening_move()

    rounds = 0
    while not strategy.done and strategy.lost is None and rounds < cap:
        rounds += 1
        strategy.play_round(next_breaker_edge(breaker, strategy.pos, spec), rounds)

    pos = strategy.pos
    if strategy.lost is not None:
        reason = "subgame_lost"
    elif strategy.done:
        reason = "scheme_complete"
    else:
        reason = "round_cap"

    verified: Optional[bool] = None
    embedding: Optional[List[str]] = None
    if reason == "scheme_complete":
        verified = verify_scheme(pos)
        if not verified:
            raise InvariantViolation("Subgames all won but B sets fail the candidate audit")
        images = extract_embedding(pos, scheme_of(pos), g, l)
        embedding = [str(image) for image in images]

    outcome = Outcome(
        winner=Player.MAKER if reason == "scheme_complete" else Player.BREAKER,
        reason=reason,
        rounds=rounds,
        round_cap=cap,
        s=spec.s,
        r=l.r,
        guarantee=check_s_guarantee(max(g.d, 1), spec.s),
        maker_edges=len(pos.maker_edges),
        breaker_edges=len(pos.breaker_edges),
        ready_round=strategy.ready_round,
        completed_round=strategy.completed_round,
        subgame_moves=strategy.subgame_moves,
        audit=strategy.audit,
        invariant_violations=strategy.invariant_violations,
        attribution_violations=strategy.attribution_violations,
        quota_violations=strategy.quota_violations,
        length_violations=strategy.length_violations,
        lost_subgame=strategy.lost.label if strategy.lost is not None else None,
        scheme_verified=verified,
        embedding=embedding,
    )
    logger.info("Game finished: %s wins (%s) after %s rounds", outcome.winner.value, reason, rounds)
    return outcome
