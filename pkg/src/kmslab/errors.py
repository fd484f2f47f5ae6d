"""Exception types shared across the package.

The scenario runner maps these onto process exit codes: configuration
problems exit 3, numerical conditioning aborts exit 4.
"""


class KmslabError(Exception):
    """Base class for all package errors."""


class InvalidSpecError(KmslabError):
    """A domain object was constructed with inconsistent parameters."""


class DimensionMismatchError(KmslabError):
    """Operands live on different truncation dimensions."""


class ConditioningError(KmslabError):
    """A modular factor would overflow; failing loudly instead of emitting inf/nan."""

    def __init__(self, message, index_pair=None):
        super().__init__(message)
        self.index_pair = index_pair


class ConditioningWarning(UserWarning):
    """Inverse quarter-weights exceed the safe magnitude; results may lose accuracy."""


class QuadratureError(KmslabError):
    """The quadrature window is too small for the requested accuracy."""


class ConfigError(KmslabError):
    """A scenario configuration failed validation."""
