"""
Error codes and exception hierarchy.

Input errors (bad data, failed preconditions, unknown ids) exit the CLI with
code 2; numerical errors (non-convergence, degenerate inputs that cannot be
flagged and carried on) exit with code 3.
"""
from enum import Enum
from typing import Any, Dict, Optional

from app.config import EXIT_INPUT_ERROR, EXIT_NUMERICAL_ERROR


class ErrorType(str, Enum):
    """Error categories"""
    # Input / schema
    EMPTY_INPUT = "empty_input"
    DUPLICATE_VOTE = "duplicate_vote"
    INVALID_VALUE = "invalid_value"
    SCHEMA_VIOLATION = "schema_violation"
    INVALID_CONFIG = "invalid_config"

    # Lookups
    UNKNOWN_ITEM = "unknown_item"
    UNKNOWN_PERSON = "unknown_person"
    UNKNOWN_VIEWER = "unknown_viewer"
    UNLABELED_PERSON = "unlabeled_person"
    UNKNOWN_MOTIF = "unknown_motif"
    NO_AUTHORSHIP = "no_authorship"
    MISSING_SIGNAL = "missing_signal"
    MISMATCHED_METRICS = "mismatched_metrics"
    DIMENSION_MISMATCH = "dimension_mismatch"

    # Preconditions on structure
    TOO_FEW_PEOPLE = "too_few_people"
    SINGLE_GROUP = "single_group"
    EMPTY_GROUP_GRAPH = "empty_group_graph"
    EMPTY_GRAPH = "empty_graph"
    NO_TRIANGLES = "no_triangles"

    # Numerical
    DEGENERATE_MATRIX = "degenerate_matrix"
    DEGENERATE_DISTRIBUTION = "degenerate_distribution"
    NON_CONVERGENCE = "non_convergence"


class BridgeRankError(Exception):
    """Base error; carries a machine-readable code"""

    exit_code = EXIT_INPUT_ERROR

    def __init__(
        self,
        error_type: ErrorType,
        message: str,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.error_type = error_type
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        return f"[{self.error_type.value}] {self.message}"


class InputError(BridgeRankError):
    """Bad input data, failed precondition or unknown identifier"""

    exit_code = EXIT_INPUT_ERROR


class NumericalError(BridgeRankError):
    """Computation could not produce a usable result"""

    exit_code = EXIT_NUMERICAL_ERROR
