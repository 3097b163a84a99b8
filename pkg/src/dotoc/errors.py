"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, ValidationError -> 1,
NumericalError and anything else -> 3.
"""


class DotocError(Exception):
    """Base class for package errors."""


class ConfigError(DotocError):
    """Bad configuration file, key, or value."""


class ValidationError(DotocError):
    """An invariant or self-check failed."""


class NumericalError(DotocError):
    """Numerical breakdown (non-finite values, dt too large, no fit possible)."""
