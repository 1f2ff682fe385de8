"""
Standardized error payloads for the command line and per-trial records.
"""

from typing import Any

from pydantic import ValidationError

from ..errors import ConfigSchemaError, PowerboundError


def validation_error_payload(exc: ValidationError) -> dict[str, Any]:
    return {
        "success": False,
        "error": "ValidationError",
        "details": exc.errors(include_url=False, include_context=False, include_input=False),
        "message": "The configuration contains invalid or missing fields.",
    }


def library_error_payload(exc: PowerboundError) -> dict[str, Any]:
    return {
        "success": False,
        "error": type(exc).__name__,
        "details": exc.details,
        "message": exc.message,
    }


def general_error_payload(exc: Exception) -> dict[str, Any]:
    return {
        "success": False,
        "error": "ServerError",
        "message": f"An unexpected error occurred: {exc}",
    }


def error_payload(exc: Exception) -> dict[str, Any]:
    """Payload for any exception, dispatched on its type."""
    if isinstance(exc, ValidationError):
        return validation_error_payload(exc)
    if isinstance(exc, PowerboundError):
        return library_error_payload(exc)
    return general_error_payload(exc)


def exit_code_for(exc: Exception) -> int:
    """2 for configuration and schema errors, 1 for everything else."""
    return 2 if isinstance(exc, (ValidationError, ConfigSchemaError)) else 1
