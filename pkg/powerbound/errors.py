"""
Exception hierarchy for powerbound.

Every library error carries a ``details`` dict so the CLI can turn it into
a standardized error payload.
"""

from typing import Any, Optional


class PowerboundError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ResourceLimitError(PowerboundError):
    """A configured search or enumeration cap would be exceeded."""


class PreconditionError(PowerboundError):
    """A mathematical precondition of the operation does not hold."""


class InvalidParameterError(PowerboundError, ValueError):
    """A numeric argument is outside its admissible range."""


class NotFoundError(PowerboundError):
    """A bounded search finished without the requested object."""


class DivisionDomainError(PowerboundError):
    """A ratio estimator hit a zero denominator."""


class NonConvergenceError(PowerboundError):
    """An iterative method hit its iteration cap.

    Attributes:
        best: The best estimate or iterate available when the cap was hit.
    """

    def __init__(self, message: str, best: Any = None, details: Optional[dict[str, Any]] = None):
        super().__init__(message, details)
        self.best = best


class InfeasibleProblemError(PowerboundError):
    """An optimization problem has an empty feasible set."""


class CertificateError(PowerboundError):
    """A re-checked postcondition failed."""


class OverflowGuardError(PowerboundError):
    """A power norm exceeded the overflow guard."""


class RankDeficiencyError(PowerboundError):
    """A family of subspaces is not linearly independent or does not span."""


class ConfigSchemaError(PowerboundError):
    """An experiment configuration does not match its schema."""


class SetFormatError(ConfigSchemaError):
    """A set or measure description file is malformed."""


class UnknownSeriesError(PowerboundError):
    """A report does not contain the requested plot series."""
