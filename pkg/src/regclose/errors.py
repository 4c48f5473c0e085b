"""Exception types shared by every module."""


class InputError(ValueError):
    """Raised when a caller hands in something the operation cannot accept."""


class ValidationError(InputError):
    """Raised when a space, map or file violates a structural axiom.

    ``witness`` carries the offending object (a pair of opens, a label, ...)
    when there is one.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetError(InputError):
    """Raised when a request would exceed a configured size budget."""
