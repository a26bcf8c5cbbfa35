"""Exception types shared across the package.

The CLI maps these to exit codes: usage/domain problems exit 2,
ResourceBudgetError exits 3, InternalConsistencyError exits 4.
"""


class ResourceBudgetError(RuntimeError):
    """A request exceeds a configured memory/time budget (e.g. sieve limit,
    divisor-enumeration cap).  The computation was refused, not attempted."""


class InternalConsistencyError(RuntimeError):
    """An internal exactness check failed (inexact division in an integer
    recurrence, mismatched dual-route value).  Signals an implementation bug,
    never bad user input."""


class OraclePrecisionError(InternalConsistencyError):
    """A floating-point oracle accumulated too much rounding error to round
    safely to an integer."""
