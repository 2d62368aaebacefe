"""Semantic exception hierarchy."""


class PowerBoundsError(Exception):
    """Base class for all library errors."""


class DomainError(PowerBoundsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfeasibleError(PowerBoundsError):
    """The requested operating point cannot be met by any parameter choice."""


class NoBracketError(PowerBoundsError):
    """A root/minimum bracket does not straddle the target."""


class ConvergenceError(PowerBoundsError):
    """An iterative solver hit its iteration cap before converging."""


class DegenerateGeometryError(PowerBoundsError):
    """An interfering transmitter coincides with the receiver."""


class ConfigError(PowerBoundsError):
    """Scenario configuration failed validation; carries the offending key."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
