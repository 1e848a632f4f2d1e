"""
Exception hierarchy for the rectifier.
Every error carries the process exit code the CLI reports for it.
"""

from typing import Any, Dict, Optional

# Exit statuses of the command-line frontend
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BOUND_ABORT = 2
EXIT_VERIFICATION = 3


class RectifierError(Exception):
    """Base class for all library errors."""

    exit_code: int = EXIT_VERIFICATION

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view used in output documents."""
        return {
            "type": type(self).__name__,
            "message": self.message,
            "details": {key: str(value) for key, value in self.details.items()},
        }


class UsageError(RectifierError):
    """Malformed input or a violated caller precondition."""
    exit_code = EXIT_USAGE


class NotPrimeError(UsageError):
    """The modulus handed to a routine is not prime."""


class PreconditionError(UsageError):
    """Inputs are well-formed but break a documented precondition."""


class BoundAbortError(RectifierError):
    """A size bound needed for correctness does not hold and force is off."""
    exit_code = EXIT_BOUND_ABORT


class VerificationError(RectifierError):
    """A brute-force check found a discrepancy."""
    exit_code = EXIT_VERIFICATION


class AnchorError(RectifierError):
    """The anchor homomorphism into F_p is undefined or has no compatible root."""
    exit_code = EXIT_VERIFICATION


class InternalError(RectifierError):
    """An invariant guaranteed by the construction failed."""
    exit_code = EXIT_VERIFICATION
