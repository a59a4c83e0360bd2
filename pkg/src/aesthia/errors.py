"""Shared exception types.

Three failure families cover the whole toolkit: bad arguments
(ParameterError), results that are mathematically undefined for the given
input (DomainError), and byte-level decode/encode trouble (CodecError).
"""


class ParameterError(ValueError):
    """An argument is outside the operation's accepted range."""


class DomainError(ValueError):
    """The requested quantity is undefined for this input (e.g. the
    fractal dimension of a blank image, skewness at zero variance)."""


class CodecError(ValueError):
    """An image or byte stream could not be decoded or encoded."""
