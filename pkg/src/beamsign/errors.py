"""Exception types shared across the package.

Input and configuration problems raise plain ``ValueError`` (or the more
specific :class:`~beamsign.expressions.ExpressionError`).  Failures of the
numerical machinery itself raise subclasses of :class:`NumericalError` so
callers, and the command line front end in particular, can tell the two
apart.
"""

from __future__ import annotations

__all__ = [
    "NumericalError",
    "ResonanceError",
    "RootSearchError",
    "ConvergenceError",
]


class NumericalError(Exception):
    """A numerical procedure failed to meet its accuracy contract."""


class ResonanceError(NumericalError):
    """The discrete operator is singular or too nearly singular to solve.

    Attributes
    ----------
    nearest_eigenvalue : float or None
        The value -lambda_k closest to the range of the coefficient c,
        which is the usual culprit.
    index : int or None
        The mode number k of that eigenvalue.
    """

    def __init__(self, message, nearest_eigenvalue=None, index=None):
        super().__init__(message)
        self.nearest_eigenvalue = nearest_eigenvalue
        self.index = index


class RootSearchError(NumericalError):
    """A bracketed root search failed to locate or confirm a root."""


class ConvergenceError(NumericalError):
    """An iteration hit its step limit before meeting the tolerance.

    Attributes
    ----------
    last_ratio : float or None
        The most recent observed contraction ratio, when available.
    """

    def __init__(self, message, last_ratio=None):
        super().__init__(message)
        self.last_ratio = last_ratio
