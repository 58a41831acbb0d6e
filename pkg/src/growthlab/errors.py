"""Exception hierarchy shared across the package."""

from __future__ import annotations


class GrowthLabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GrowthLabError, ValueError):
    """An evaluation point is outside the mathematical domain (e.g. K <= 0)."""


class OutOfDomainError(DomainError):
    """A characteristic foot leaves the initial-profile domain; no extrapolation."""


class ConfigurationError(GrowthLabError, ValueError):
    """Invalid parameters: bad family parameters, CFL violation, bad settings."""


class ConfigFileError(ConfigurationError):
    """A scenario file failed validation; collects every error, not just the first."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


class IntegrationError(GrowthLabError, RuntimeError):
    """The ODE integration had to stop; carries the offending time."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class NumericalOverflowError(IntegrationError):
    """A computed quantity left the representable floating-point range."""


class AnalysisError(GrowthLabError, RuntimeError):
    """A post-processing step cannot produce a meaningful answer."""
