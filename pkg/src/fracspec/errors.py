"""Exception and warning taxonomy shared by every module.

Validation problems derive from ``ValueError`` so that callers using plain
try/except ValueError keep working; numerical-quality problems get their own
hierarchy so the CLI can map them to a distinct exit code.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ModelValidationError(ValueError):
    """One or more model parameters violate the family's constraints.

    Attributes
    ----------
    violations : list of str
        One human-readable entry per violated constraint, each naming the
        offending field and its bound.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NumericalError(RuntimeError):
    """Base class for runtime numerical failures (exit code 1 in the CLI)."""


class DivergentVarianceError(NumericalError):
    """Cov(0) requested for a model whose spectral density is not integrable."""


class AccuracyError(NumericalError):
    """A quadrature or series failed to reach its target accuracy.

    Carries the best available estimate so callers can decide whether the
    partial result is still useful.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class InsufficientDecayError(NumericalError):
    """A covariance curve handed to the forward transform has not decayed."""


class AliasingGuardError(NumericalError):
    """Sampling step too coarse for the model's spectral tail.

    Attributes
    ----------
    dt_bound : float
        Largest step that would satisfy the guard for this model.
    """

    def __init__(self, message, dt_bound):
        super().__init__(message)
        self.dt_bound = dt_bound


class TailAccuracyWarning(UserWarning):
    """Density evaluated in a regime where only reduced accuracy is promised."""
