"""Exception types shared across the package."""

from __future__ import annotations


class TscarmaError(Exception):
    """Base class for all package errors."""


class DomainError(TscarmaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(TscarmaError, ValueError):
    """A parameter set or configuration violates its invariants."""


class ConvergenceError(TscarmaError, ArithmeticError):
    """An iterative evaluation failed to reach tolerance.

    Attributes carry diagnostics: ``terms_used``, ``last_term``, ``partial_sum``.
    """

    def __init__(self, message, *, terms_used=None, last_term=None, partial_sum=None):
        super().__init__(message)
        self.terms_used = terms_used
        self.last_term = last_term
        self.partial_sum = partial_sum


class QuadratureError(TscarmaError, ArithmeticError):
    """Adaptive quadrature did not converge; ``detail`` holds the integrator message."""

    def __init__(self, message, *, detail=None):
        super().__init__(message)
        self.detail = detail


class UnsupportedError(TscarmaError):
    """The requested operation is not available for this model or regime."""


class ConsistencyError(TscarmaError, ArithmeticError):
    """A closed form disagreed with its structural quadrature cross-check."""


class LinearAlgebraError(TscarmaError, ArithmeticError):
    """A covariance factorization failed."""


class ConfigError(TscarmaError, ValueError):
    """A run configuration is invalid; ``key`` names the offending entry."""

    def __init__(self, message, *, key=None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class CarmaRootError(ValidationError):
    """Base class for autoregressive-polynomial root rejections; ``root`` names the culprit."""

    def __init__(self, message, *, root=None):
        super().__init__(message)
        self.root = root


class ComplexRootError(CarmaRootError):
    """A root of the autoregressive polynomial has a non-negligible imaginary part."""


class NonNegativeRootError(CarmaRootError):
    """A root of the autoregressive polynomial is not strictly negative."""


class RepeatedRootError(CarmaRootError):
    """Two roots of the autoregressive polynomial coincide to working precision."""


class CommonRootError(CarmaRootError):
    """The moving-average polynomial vanishes at an autoregressive root."""
