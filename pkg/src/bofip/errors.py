"""Exception hierarchy shared across the package.

Every error raised by this package derives from :class:`BofipError`, so
callers can catch one base class. The CLI maps the subclasses onto exit
codes (configuration vs. parse vs. runtime).
"""


class BofipError(Exception):
    """Base class for all package errors."""


class ConfigurationError(BofipError, ValueError):
    """A parameter combination that can never produce a valid run."""


class InvalidParameterError(BofipError, ValueError):
    """A single argument outside its mathematical domain."""


class InputError(BofipError, ValueError):
    """Malformed numerical input data (e.g. duplicate design rows)."""


class BoundsIndexError(BofipError, IndexError):
    """A grid-row or sub-space index outside its valid range."""


class IllConditionedModelError(BofipError, RuntimeError):
    """Correlation matrix factorization failed even after nugget escalation."""


class GridExhaustedError(BofipError, RuntimeError):
    """Every grid row of a sub-space has already been sampled."""


class EvaluationError(BofipError, RuntimeError):
    """A black-box objective call failed; carries the offending row context."""


class SchemaError(BofipError, ValueError):
    """A data file with the wrong column structure."""


class ParseError(BofipError, ValueError):
    """A data or config file with an unreadable row; carries the line number."""
