"""
Exception hierarchy shared by the library and the CLI.

Argument and configuration errors also derive from ``ValueError`` so callers that
only care about "bad input" can catch the builtin.

Classes:
    WmmLabError:             Root of all library errors.
    InvalidArgumentError:    An argument violates a documented precondition.
    ConfigurationError:      A configuration refers to something that does not exist.
    RecipeRangeError:        A synthetic series recipe produces non-finite values.
    InsufficientDataError:   Not enough samples for the requested split sizes.
    IdxParseError:           Malformed IDX input; carries the byte offset of the fault.
    NotEnoughTrialsError:    Fewer successful trials than a summary requires.
    TrainingDivergedError:   A run finished with non-finite loss (CLI exit code 2).
"""


class WmmLabError(Exception):
    """Base class for all errors raised by wmm_lab."""


class InvalidArgumentError(WmmLabError, ValueError):
    """An argument violates a documented precondition."""


class ConfigurationError(WmmLabError, ValueError):
    """A configuration is empty or refers to unknown layers or gates."""


class RecipeRangeError(InvalidArgumentError):
    """A series recipe evaluates to non-finite values."""


class InsufficientDataError(InvalidArgumentError):
    """The data pool cannot satisfy the requested split sizes."""

    def __init__(self, message: str, shortfall: int):
        super().__init__(message)
        self.shortfall = shortfall


class IdxParseError(WmmLabError, ValueError):
    """Malformed IDX input. ``offset`` is the byte position where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class IdxMagicError(IdxParseError):
    """The two leading magic bytes are not zero."""


class IdxTruncatedError(IdxParseError):
    """The input ends before the declared header or payload is complete."""


class IdxUnsupportedTypeError(IdxParseError):
    """The header declares an element type code outside the IDX convention."""


class IdxTrailingBytesError(IdxParseError):
    """Bytes remain after the declared payload."""


class NotEnoughTrialsError(WmmLabError, ValueError):
    """A top-k summary was requested over fewer successful trials than k."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class TrainingDivergedError(WmmLabError):
    """A training run ended with a non-finite loss."""
