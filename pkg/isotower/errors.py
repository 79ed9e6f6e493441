# isotower/errors.py
"""
Exception hierarchy shared by every isotower module.
"""


class IsotowerError(Exception):
    """Base class for all isotower failures."""


class InvalidInput(IsotowerError, ValueError):
    """Operand violates a stated precondition (shape, symmetry, domain U)."""


class DomainError(IsotowerError):
    """A spectrum left the declared domain of a scalar function."""


class NotInjective(IsotowerError):
    """A map that had to be injective has a numerical kernel."""


class DegenerateAlpha(IsotowerError):
    """The top-k eigenspace of alpha has dimension below k (alpha lies in Y_k)."""


class FacialViolation(IsotowerError):
    """A facial map produced a non-ascending tuple."""


class ResolutionError(IsotowerError):
    """Sampled winding did not settle near an integer."""


class OutsideChart(IsotowerError):
    """A point lies outside the chart an inverse formula is valid on."""


class NotInvertible(IsotowerError):
    """A group-ring element that had to be a unit is not one."""


class TooLarge(IsotowerError):
    """Input exceeds the desk-scale bounds of an exact computation."""


class UsageError(IsotowerError):
    """Bad command-line or suite request."""
