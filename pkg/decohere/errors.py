"""
Exception hierarchy
-------------------

Every failure the package reports on purpose derives from
``DecohereError``.  The command line maps the two families onto exit
codes: configuration problems exit with 1, numerical problems (oracle
non-convergence, failed validation checks) exit with 2.
"""

from __future__ import annotations

from typing import Optional

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


class DecohereError(Exception):
    """Base class for errors raised by the package."""

    exit_code: int = EXIT_NUMERICAL


class DomainError(DecohereError, ValueError):
    """An argument lies outside the domain of a function.

    Raised instead of returning NaN, e.g. ``cosint(0.0)``.
    """


class ConfigError(DecohereError):
    """A scenario file or override failed validation.

    ``field`` holds the dotted path of the offending key when known.
    """

    exit_code = EXIT_CONFIG

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class RegimeMismatchError(ConfigError):
    """The parameters are not admissible for the requested regime."""


class NumericalError(DecohereError):
    """A numerical procedure failed to reach its tolerance."""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, achieved_error: Optional[float] = None) -> None:
        self.achieved_error = achieved_error
        if achieved_error is not None:
            message = f"{message} (achieved error estimate {achieved_error:.3e})"
        super().__init__(message)
