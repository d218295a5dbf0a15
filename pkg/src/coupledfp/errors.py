"""Semantic exception hierarchy.

Every error raised by this package derives from :class:`CoupledFPError`, so
callers can catch one base class. The split mirrors how failures are handled:
bad inputs are the caller's fault, domain errors mean a map was evaluated
where its hypotheses were never claimed, and divergence means the iteration
left the region where it can be trusted.
"""

from __future__ import annotations


class CoupledFPError(Exception):
    """Base class for all errors raised by coupledfp."""


class InputError(CoupledFPError, ValueError):
    """Inputs violate a contract: wrong shape, bad config, invalid value."""


class DimensionMismatchError(InputError):
    """Points or pairs of different dimensions were combined."""


class ComparabilityError(InputError):
    """A pair of pairs is not ordered in the direction an operation requires."""


class DomainError(CoupledFPError):
    """A map or expression was evaluated outside its admissible domain."""


class DivergenceError(CoupledFPError):
    """The iteration produced a non-finite iterate or escaped the padded box."""


class ExpressionError(InputError):
    """Expression text failed to parse or referenced an unknown name.

    ``position`` is the byte offset into the source text where the problem
    was detected.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position
