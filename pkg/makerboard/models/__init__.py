"""
Models package for makerboard.

This package contains the pydantic records and the exception hierarchy
shared by every service.
"""

from .board import (
    BoardSpec,
    BoardSummary,
    CandidateScheme,
    EdgeCountReport,
    Player,
    StarEdge,
    StarVertex,
    format_edge,
    parse_edge,
)
from .exceptions import (
    AlreadyClaimedError,
    BoardError,
    BreakerPolicyError,
    CandidateConditionError,
    ConfigError,
    GameAborted,
    GenerationBudgetExceeded,
    GraphError,
    HyperedgeTooSmallError,
    InvariantViolation,
    LevelingError,
    MakerBoardError,
    NoSubgameAvailable,
    NotABoardEdgeError,
    NoValidImageError,
    OracleCapExceeded,
    ResampleBudgetExceeded,
    TranscriptMismatch,
)
from .game import (
    AuditEntry,
    ExperimentReport,
    OracleReport,
    Outcome,
    RunConfig,
    RunRecord,
    TranscriptEvent,
    TranscriptFooter,
    TranscriptHeader,
)
from .graph import BlockingDag, DagBoundsReport, Leveling, LllCondition, TargetGraph

__all__ = [
    "AlreadyClaimedError",
    "AuditEntry",
    "BlockingDag",
    "BoardError",
    "BoardSpec",
    "BoardSummary",
    "BreakerPolicyError",
    "CandidateConditionError",
    "CandidateScheme",
    "ConfigError",
    "DagBoundsReport",
    "EdgeCountReport",
    "ExperimentReport",
    "GameAborted",
    "GenerationBudgetExceeded",
    "GraphError",
    "HyperedgeTooSmallError",
    "InvariantViolation",
    "Leveling",
    "LevelingError",
    "LllCondition",
    "MakerBoardError",
    "NoSubgameAvailable",
    "NotABoardEdgeError",
    "NoValidImageError",
    "OracleCapExceeded",
    "OracleReport",
    "Outcome",
    "Player",
    "ResampleBudgetExceeded",
    "RunConfig",
    "RunRecord",
    "StarEdge",
    "StarVertex",
    "TargetGraph",
    "TranscriptEvent",
    "TranscriptFooter",
    "TranscriptHeader",
    "TranscriptMismatch",
    "format_edge",
    "parse_edge",
]
