"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, ``DataError``
exits 2 and ``NumericalError`` exits 3.
"""


class ShadowVqcError(Exception):
    """Base class for package errors."""


class DataError(ShadowVqcError):
    """Malformed input data: parse failures, shape/label mismatches."""


class ConfigError(DataError):
    """Invalid configuration file or configuration values."""


class NumericalError(ShadowVqcError):
    """Non-finite values or other numerical failures during optimization."""
