"""Exception types shared across the library.

The CLI maps these onto exit codes: DomainError -> 2,
NoConvergenceError -> 3.
"""


class StableTailError(Exception):
    """Base class for all library errors."""


class DomainError(StableTailError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ParityError(DomainError):
    """The requested branch does not apply to this (integer-parity) order.

    Raised e.g. when the generic tail-constant formula is asked for an
    even-integer order, where the leading constant vanishes and the
    degenerate branch must be used instead.
    """


class UnsupportedOrderError(DomainError):
    """Operation not provided for this Bessel order (e.g. complex argument
    with non-half-integer order)."""


class UnsupportedDimensionError(DomainError):
    """Operation requires an odd space dimension (half-integer Bessel order)."""


class NoConvergenceError(StableTailError, RuntimeError):
    """A quadrature or acceleration scheme stalled before reaching the
    requested tolerance within its evaluation budget."""


class ResolutionError(DomainError):
    """A grid is too coarse to resolve the requested oscillation."""
