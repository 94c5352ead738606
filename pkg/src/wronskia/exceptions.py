"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class WronskiaError(Exception):
    """Base class for all package errors."""


class DomainError(WronskiaError, ValueError):
    """An evaluation point or stencil falls outside the valid domain."""


class ArgumentError(WronskiaError, ValueError):
    """Invalid parameters (non-uniform grid, violated family condition, ...)."""


class WronskianVanishes(WronskiaError, ZeroDivisionError):
    """The Wronskian is zero, so the functions are not a fundamental set."""


class SingularSeedError(WronskiaError, ArithmeticError):
    """A seed solution (or its derivative) vanishes on the working grid.

    Attributes
    ----------
    t : float
        First grid point where the seed was found singular.
    """

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


class DegeneracyError(WronskiaError, ArithmeticError):
    """Two computed solutions are numerically linearly dependent."""


class RegularityError(WronskiaError, ArithmeticError):
    """A curve is not regular, or its curvature vanishes, at some point."""
