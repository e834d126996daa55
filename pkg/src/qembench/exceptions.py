"""Exception types shared across the package.

Everything derives from QembenchError so callers can catch package errors
in one clause; the subclasses keep ValueError/RuntimeError semantics so
generic handlers still work.
"""


class QembenchError(Exception):
    """Base class for all package errors."""


class DimensionError(QembenchError, ValueError):
    """Truncation dimension too small or otherwise invalid."""


class ShapeError(QembenchError, ValueError):
    """Matrix/vector shapes do not match the operation contract."""


class NumericError(QembenchError, ArithmeticError):
    """Overflow or non-finite values produced during computation."""


class TruncationError(QembenchError, ValueError):
    """State lost too much norm to the truncated Fock tail."""


class EncodingDomainError(QembenchError, ValueError):
    """Encoder parameter outside its configured clamp."""


class DataError(QembenchError, ValueError):
    """Malformed or non-finite input data."""


class SchemaError(QembenchError, ValueError):
    """Input file does not match the expected column schema."""


class BalanceError(QembenchError, ValueError):
    """Class-balancing requested on a dataset without both classes."""


class StratificationError(QembenchError, ValueError):
    """Stratified split impossible (a class has too few rows)."""


class ConfigError(QembenchError, ValueError):
    """Experiment configuration failed validation."""
