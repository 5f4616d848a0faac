"""
Custom exceptions for the makerboard package.

This module defines the exception classes used throughout the package.
Each exception formats its own detail message and carries the process exit
code the command-line surface maps it to.
"""

from typing import Any, Optional

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MAKER_LOST = 2


class MakerBoardError(Exception):
    """
    Base class for every error raised by makerboard.

    Attributes:
        detail: Human readable description of the failure
        exit_code: Exit code the CLI returns for this error
    """

    exit_code: int = EXIT_ERROR

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        """
        Initialize the error.

        Args:
            detail: The error message
            exit_code: Optional override of the class exit code
        """
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class GraphError(MakerBoardError):
    """
    Raised when a target graph cannot be parsed, built or queried.
    """


class GenerationBudgetExceeded(GraphError):
    """
    Raised when random regular generation runs out of retries.
    """

    def __init__(self, n: int, d: int, attempts: int):
        """
        Initialize the GenerationBudgetExceeded error.

        Args:
            n: Requested vertex count
            d: Requested degree
            attempts: Number of pairings tried
        """
        super().__init__(
            f"No simple {d}-regular graph on {n} vertices after {attempts} pairings"
        )


class LevelingError(MakerBoardError):
    """
    Raised when a leveling is malformed or violates the distance-3 rule.
    """


class ResampleBudgetExceeded(LevelingError):
    """
    Raised when the resampling leveling does not settle within its cap.
    """

    def __init__(self, cap: int):
        """
        Initialize the ResampleBudgetExceeded error.

        Args:
            cap: The resample cap that was reached
        """
        super().__init__(f"Leveling still violated after {cap} resamples")


class BoardError(MakerBoardError):
    """
    Raised for malformed board parameters or star-vertex addresses.
    """


class AlreadyClaimedError(BoardError):
    """
    Raised when a player claims an edge that is already taken.
    """

    def __init__(self, edge: Any):
        """
        Initialize the AlreadyClaimedError.

        Args:
            edge: The star-edge that was claimed twice
        """
        super().__init__(f"Edge {edge_text(edge)} is already claimed")


class NotABoardEdgeError(BoardError):
    """
    Raised when a pair of star-vertices is not an edge of the board.
    """

    def __init__(self, edge: Any):
        """
        Initialize the NotABoardEdgeError.

        Args:
            edge: The offending pair of star-vertices
        """
        super().__init__(f"{edge_text(edge)} is not an edge of the board")


class CandidateConditionError(MakerBoardError):
    """
    Raised when a candidate query is made before its B sets are determined,
    or against a scheme whose B sets differ from the position's.
    """


class NoValidImageError(MakerBoardError):
    """
    Raised when embedding extraction finds no image for a vertex.

    A verified candidate scheme always leaves an image, so this signals a
    verification bug.
    """

    def __init__(self, vertex: int):
        """
        Initialize the NoValidImageError.

        Args:
            vertex: The target-graph vertex left without an image
        """
        super().__init__(f"No Maker-connected image available for vertex {vertex}")


class HyperedgeTooSmallError(MakerBoardError):
    """
    Raised when a subgame hyperedge is below the size its candidates promise.
    """

    def __init__(self, owner: str, size: int, required: float):
        """
        Initialize the HyperedgeTooSmallError.

        Args:
            owner: Subgame label
            size: Size of the smallest hyperedge
            required: Lower bound implied by the candidate property
        """
        super().__init__(
            f"Subgame {owner} has a hyperedge of size {size} < {required:.3f}"
        )


class InvariantViolation(MakerBoardError):
    """
    Raised when a strategy invariant fails during play.
    """


class NoSubgameAvailable(MakerBoardError):
    """
    Terminal signal: every vertex is completed, nothing is left to play.
    """

    def __init__(self):
        """
        Initialize the NoSubgameAvailable signal.
        """
        super().__init__("Every vertex is completed; no subgame is left to play")


class BreakerPolicyError(MakerBoardError):
    """
    Raised when a Breaker policy produces an illegal move.
    """


class GameAborted(MakerBoardError):
    """
    Raised when an interactive Breaker quits the game.
    """

    def __init__(self):
        """
        Initialize the GameAborted error.
        """
        super().__init__("Game aborted by the interactive Breaker")


class OracleCapExceeded(MakerBoardError):
    """
    Raised when an exhaustive search is asked to exceed its state cap.
    """

    def __init__(self, size: int, cap: int):
        """
        Initialize the OracleCapExceeded error.

        Args:
            size: Requested instance size
            cap: Largest supported size
        """
        super().__init__(f"Instance of size {size} exceeds the oracle cap of {cap}")


class ConfigError(MakerBoardError):
    """
    Raised for invalid run configuration.
    """


class TranscriptMismatch(MakerBoardError):
    """
    Raised when a replayed transcript diverges from the recorded one.
    """

    def __init__(self, line_number: int, expected: str, actual: str):
        """
        Initialize the TranscriptMismatch error.

        Args:
            line_number: 1-based line of the first divergence
            expected: The recorded line
            actual: The replayed line
        """
        super().__init__(
            f"Transcript diverges at line {line_number}:\n"
            f"  recorded: {expected}\n"
            f"  replayed: {actual}"
        )
        self.line_number = line_number


def edge_text(edge: Any) -> str:
    """
    Render a star-edge for messages, tolerating malformed input.

    Args:
        edge: A pair of star-vertices, or anything else

    Returns:
        str: Printable edge text
    """
    try:
        first, second = edge
        return f"{first} {second}"
    except (TypeError, ValueError):
        return repr(edge)
