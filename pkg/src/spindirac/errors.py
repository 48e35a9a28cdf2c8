"""Exception types shared across spindirac modules."""

from __future__ import annotations


class HierarchyError(ValueError):
    """A neck-profile parameter set violates the scale hierarchy."""


class InsufficientCutoffError(ValueError):
    """Input spectra are not complete far enough to answer the request."""


class EigenSolverError(RuntimeError):
    """An eigensolve failed to converge or missed its residual bound."""
