"""Custom exception hierarchy for eh-vortices."""

from __future__ import annotations


class EHVortexError(Exception):
    """Base exception for all eh-vortices errors."""


class ConfigError(EHVortexError):
    """Raised when a run configuration is invalid or cannot be loaded."""


class ParameterError(EHVortexError, ValueError):
    """Raised when an operation is called outside its preconditions."""


class DegreeCapError(EHVortexError):
    """Raised when a polynomial operation would exceed the total-degree cap."""

    def __init__(self, operation: str, degree: int, cap: int) -> None:
        self.operation = operation
        self.degree = degree
        self.cap = cap
        super().__init__(f"{operation}: result degree {degree} exceeds cap {cap}")


class OnNodeError(EHVortexError):
    """Raised when a plaquette corner sits exactly on a zero of the sampled field."""


class IntegrationError(EHVortexError):
    """Raised when the time integrator produces non-finite values."""

    def __init__(self, time: float, detail: str = "non-finite field values") -> None:
        self.time = time
        super().__init__(f"integration aborted at t={time:.6g}: {detail}")


class ParseError(EHVortexError):
    """Raised when a polynomial text or curve document cannot be parsed."""
