"""
Custom exceptions for secretary cutoffs
"""

from typing import Optional


class SecretaryError(Exception):
    """Base error for cutoff analysis"""

    def __init__(self, message: str, context: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        if self.context:
            return f"{self.message} ({self.context})"
        return self.message


class DomainError(SecretaryError):
    """Argument outside the domain of an operation"""


class UtilityValidationError(DomainError):
    """Utility function violates its construction invariants"""

    def __init__(self, reason: str, utility: Optional[str] = None):
        message = f"Invalid utility: {reason}"
        super().__init__(message, f"utility: {utility}" if utility else None)
        self.reason = reason
        self.utility = utility


class SpecParseError(DomainError):
    """Textual input could not be parsed"""

    def __init__(self, token: str, expected_format: Optional[str] = None):
        message = f"Cannot parse '{token}'"
        if expected_format:
            message += f". Expected format: {expected_format}"
        super().__init__(message)
        self.token = token
        self.expected_format = expected_format


class NumericError(SecretaryError):
    """Numerical procedure failed"""


class QuadratureError(NumericError):
    """Adaptive quadrature did not reach the requested tolerance"""

    def __init__(self, estimate: float, error_bound: float, details: Optional[str] = None):
        message = f"Quadrature did not converge: estimate {estimate:.12g}, error bound {error_bound:.3g}"
        super().__init__(message, details)
        self.estimate = estimate
        self.error_bound = error_bound


class FitError(NumericError):
    """Power-law fit is degenerate"""

    def __init__(self, reason: str, points: int = 0):
        super().__init__(f"Power-law fit failed: {reason}", f"points: {points}" if points else None)
        self.reason = reason
        self.points = points


class SimulationError(NumericError):
    """Monte Carlo sanity check failed"""


class CapacityError(SecretaryError):
    """Problem size beyond what an exact method can enumerate"""

    def __init__(self, size: int, limit: int, alternative: Optional[str] = None):
        message = f"Size {size} exceeds enumeration limit {limit}"
        super().__init__(message, f"use {alternative}" if alternative else None)
        self.size = size
        self.limit = limit
