"""Exception types shared across the package."""


class TrigaussError(Exception):
    """Base class for all package errors."""


class DomainError(TrigaussError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ProfileError(DomainError):
    """An invalid correlation profile (nonpositive, bad knots, ...)."""


class EstimationError(TrigaussError, RuntimeError):
    """Maximum likelihood machinery failed in a way that is not just
    non-convergence (e.g. no score root inside the parameter space)."""


class IngestionError(TrigaussError, ValueError):
    """A data file could not be parsed into a paired series."""


class QuadratureError(TrigaussError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
