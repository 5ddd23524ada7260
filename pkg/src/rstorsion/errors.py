"""Exception types shared across the package."""
from __future__ import annotations


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class ToleranceError(RuntimeError):
    """A numeric routine could not certify its accuracy contract."""


class ConfigError(ValueError):
    """Malformed or inconsistent job configuration."""
