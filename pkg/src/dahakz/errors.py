"""Error taxonomy shared by the library and the CLI exit codes."""
from __future__ import annotations

__all__ = ["ConfigError", "ScopeError", "ToleranceError", "InternalCheckError"]


class ConfigError(ValueError):
    """Invalid user-facing configuration (CLI exit code 2)."""


class ScopeError(ValueError):
    """Input outside the implemented regular scope (CLI exit code 3)."""


class ToleranceError(ArithmeticError):
    """Numeric residual above the configured tolerance (CLI exit code 4)."""


class InternalCheckError(AssertionError):
    """An exact internal consistency check failed (indicates a bug)."""
