"""Exception types raised across the package.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch one thing.
"""


class CvssiError(ValueError):
    """Base class for every error raised by this package."""


class RejectedInputError(CvssiError):
    """An image or score vector violates a data invariant (size, finiteness)."""


class ConfigurationError(CvssiError):
    """A parameter is out of its valid range (window size, weights, ...)."""


class ShapeError(CvssiError):
    """Two operands that must agree in shape do not, or an input is empty."""


class UndefinedCorrelationError(CvssiError):
    """A correlation is undefined because one vector has zero variance."""


class ManifestError(CvssiError):
    """A manifest or score file could not be parsed."""


class JoinError(CvssiError):
    """Scores and manifest records could not be matched by path."""
