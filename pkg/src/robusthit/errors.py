"""Shared exception types.

Domain failures raise subclasses of WorkbenchError so the CLI can map them
to exit code 1; solver-process trouble is BackendError (exit code 3).
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for domain errors raised by this package."""


class BudgetError(WorkbenchError):
    """A requested computation exceeds the configured resource budget."""


class RangeError(WorkbenchError):
    """An index or coordinate lies outside its documented domain."""


class DegenerateError(WorkbenchError):
    """An input is degenerate for the requested operation (e.g. f = 0)."""


class DimensionError(WorkbenchError):
    """Mismatched variable counts or point lengths."""


class CapacityError(WorkbenchError):
    """A circuit does not fit in the available skeleton width."""


class ShapeError(WorkbenchError):
    """A circuit is not in the normal form an embedding requires."""


class InfeasibleError(WorkbenchError):
    """No solution exists within the requested search space."""


class ExhaustedError(WorkbenchError):
    """Candidate enumeration ended without an accepting query."""


class BackendError(WorkbenchError):
    """External solver process failed or produced unparseable output."""
