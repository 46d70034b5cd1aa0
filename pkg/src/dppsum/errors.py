"""Exception types shared across the package.

The CLI maps these onto exit codes: validation failures exit 2,
numerical failures exit 3, I/O failures (plain OSError) exit 4.
"""


class ValidationError(ValueError):
    """Input violates a documented precondition or file contract."""


class ParseError(ValidationError):
    """A cluster / model / similarity file is malformed."""


class NumericalError(RuntimeError):
    """A linear-algebra step failed or produced non-finite values."""
