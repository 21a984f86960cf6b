"""Exception types shared across the package.

Plain ``ValueError`` is used for domain errors on individual arguments
(negative gains, out-of-range probabilities, inconsistent scenario/level
combinations).  ``RefusalError`` marks requests the toolkit deliberately
declines rather than answering badly: exhaustive searches above the size
cap, sweeps above the sampling budget, and closed forms outside their
supported parameter regime.
"""


class RefusalError(RuntimeError):
    """Raised when a request is declined (size cap, budget, or unsupported regime)."""


class BudgetError(RefusalError):
    """Raised when a sweep would exceed the configured sampling budget."""
