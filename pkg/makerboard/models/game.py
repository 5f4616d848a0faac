"""
Game run models.

This module defines the run configuration, the outcome of one game, the
transcript records written one per line, and the experiment aggregates.
"""

import re
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from .board import Player

TRANSCRIPT_VERSION = 1

_NAMED_GRAPH = re.compile(r"^(c\d+|e\d+|petersen|k4|k2)$")
_RANDOM_GRAPH = re.compile(r"^random:\d+:\d+:-?\d+$")

BreakerKind = Literal["random", "greedy_subgame", "scatter", "scripted", "interactive"]
CaseTag = Literal["case1", "case2", "case3", "pass", "opening"]


class RunConfig(BaseModel):
    """
    Configuration of a game or an experiment.

    Attributes:
        graph: Named graph (c{n}, e{n}, petersen, k4, k2), "random:n:d:seed"
            or "file:<path>" to an edge list
        leveling: Leveling algorithm
        leveling_seed: Seed of the resampling leveling
        leveling_file: Path of a "vertex level" file; overrides the algorithm
        s: "formula", "guarantee" or a positive integer
        breaker: Breaker policy
        seed: Breaker seed (the base seed in experiments)
        script: Path of a move script for the scripted Breaker
        repetitions: Number of games in an experiment
        round_cap: Optional override of the default round cap
        maker_first: Maker opens the game with a phantom move
        workers: Parallel worker processes for experiments
        output: Output path (transcript or run records)
    """

    graph: str = "c6"
    leveling: Literal["greedy", "lll"] = "greedy"
    leveling_seed: int = 0
    leveling_file: Optional[str] = None
    s: str = "guarantee"
    breaker: BreakerKind = "random"
    seed: int = 0
    script: Optional[str] = None
    repetitions: int = Field(default=1, ge=0)
    round_cap: Optional[int] = Field(default=None, ge=1)
    maker_first: bool = False
    workers: int = Field(default=1, ge=1)
    output: Optional[str] = None

    @field_validator("graph")
    @classmethod
    def check_graph(cls, value: str) -> str:
        """
        Validate the graph source notation.
        """
        value = value.strip()
        if _NAMED_GRAPH.match(value) or _RANDOM_GRAPH.match(value):
            return value
        if value.startswith("file:") and len(value) > len("file:"):
            return value
        raise ValueError(f"unknown graph source '{value}'")

    @field_validator("s", mode="before")
    @classmethod
    def check_s(cls, value: Union[int, str]) -> str:
        """
        Validate the s mode and normalize integers to strings.
        """
        text = str(value).strip().lower()
        if text in ("formula", "guarantee"):
            return text
        if text.isdigit() and int(text) >= 1:
            return str(int(text))
        raise ValueError(f"s must be 'formula', 'guarantee' or a positive integer, got '{value}'")


class AuditEntry(BaseModel):
    """
    Untouched-reserve audit taken when a vertex becomes ready.

    Attributes:
        vertex: The vertex that became ready
        round: Round in which it became ready
        untouched: Untouched star-vertices of S_v at that moment
        touched: Touched star-vertices of S_v
        touched_bound: d * s^2 * |P(v)|
        invariant_ok: untouched >= s
        attribution_ok: Every touched vertex is attributed to P(v), at most
            d * s^2 per descendant
    """

    vertex: int
    round: int
    untouched: int
    touched: int
    touched_bound: int
    invariant_ok: bool
    attribution_ok: bool


class Outcome(BaseModel):
    """
    Result of one game.

    Attributes:
        winner: Player who won
        reason: Why the game ended
        rounds: Rounds played
        round_cap: Cap in force
        s: Block parameter
        r: Level range
        guarantee: Whether check_s_guarantee holds for (d, s)
        maker_edges: Edges claimed by Maker
        breaker_edges: Edges claimed by Breaker
        ready_round: Round each vertex became ready (None if never)
        completed_round: Round each vertex became completed (None if never)
        subgame_moves: Maker moves spent inside G_v per vertex
        audit: Untouched-reserve audit trail
        invariant_violations: Failed untouched-reserve audits
        attribution_violations: Failed attribution audits
        quota_violations: Hyperedges of exhausted subgames below quota
        length_violations: Completed vertices whose G_v took more than |N^-(v)| * s^2 Maker moves
        lost_subgame: Label of the subgame that was lost, if any
        scheme_verified: Result of the end-of-game candidate audit
        embedding: Image of every vertex of G as star-vertex notation
    """

    winner: Player
    reason: Literal["scheme_complete", "round_cap", "subgame_lost"]
    rounds: int
    round_cap: int
    s: int
    r: int
    guarantee: bool
    maker_edges: int
    breaker_edges: int
    ready_round: List[Optional[int]]
    completed_round: List[Optional[int]]
    subgame_moves: List[int]
    audit: List[AuditEntry]
    invariant_violations: int = 0
    attribution_violations: int = 0
    quota_violations: int = 0
    length_violations: int = 0
    lost_subgame: Optional[str] = None
    scheme_verified: Optional[bool] = None
    embedding: Optional[List[str]] = None


class TranscriptHeader(BaseModel):
    """
    First line of a transcript.
    """

    kind: Literal["header"] = "header"
    version: int = TRANSCRIPT_VERSION
    config: RunConfig
    n: int
    d: int
    r: int
    s: int
    guarantee: bool
    block_sizes: List[int]
    exact_edges: int
    edge_bound_log10: Optional[float]


class TranscriptEvent(BaseModel):
    """
    One move of a transcript.

    Attributes:
        round: Round number
        player: Player who moved
        edge: Claimed edge, None for a Breaker pass
        subgame: Subgame that received the move, as "v{u}|v{v}#{idx}"
        case: Dispatch case of the round
    """

    kind: Literal["event"] = "event"
    round: int
    player: Player
    edge: Optional[str]
    subgame: Optional[str] = None
    case: CaseTag


class TranscriptFooter(BaseModel):
    """
    Last line of a transcript.
    """

    kind: Literal["footer"] = "footer"
    outcome: Outcome


class RunRecord(BaseModel):
    """
    One experiment run, written as one line.

    Attributes:
        index: Run index
        seed: Breaker seed of the run
        outcome: Outcome when the run finished
        error: Error message when the run failed
    """

    index: int
    seed: int
    outcome: Optional[Outcome] = None
    error: Optional[str] = None


class ExperimentReport(BaseModel):
    """
    Aggregate of an experiment.

    Attributes:
        runs: Runs attempted
        wins: Maker wins
        losses: Runs Maker did not win
        errors: Runs that raised
        mean_rounds: Mean rounds over finished runs
        max_rounds: Largest round count
        max_round_cap: Largest round cap in force
        invariant_violations: Sum of untouched-reserve violations
        attribution_violations: Sum of attribution violations
        quota_violations: Sum of quota violations
        length_violations: Sum of G_v length violations
        error_messages: Messages of failed runs
    """

    runs: int = 0
    wins: int = 0
    losses: int = 0
    errors: int = 0
    mean_rounds: float = 0.0
    max_rounds: int = 0
    max_round_cap: int = 0
    invariant_violations: int = 0
    attribution_violations: int = 0
    quota_violations: int = 0
    length_violations: int = 0
    error_messages: List[str] = Field(default_factory=list)


class OracleReport(BaseModel):
    """
    Result of one differential suite.

    Attributes:
        suite: Suite name
        instances: Instances generated
        checks: Comparisons made
        disagreements: Comparisons that failed
        details: One message per failed comparison
    """

    suite: Literal["candidate", "engine"]
    instances: int = 0
    checks: int = 0
    disagreements: int = 0
    details: List[str] = Field(default_factory=list)
