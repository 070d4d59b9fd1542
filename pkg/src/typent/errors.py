"""Exception types shared across modules.

Plain ValueError is used for domain and usage errors (bad dimensions,
out-of-range arguments, unknown functional names).  The types below mark
conditions a caller may want to branch on; the command line maps them to
distinct exit codes.
"""


class FeasibilityError(RuntimeError):
    """Requested constrained problem has no physical (nonnegative) solution."""


class ConvergenceError(RuntimeError):
    """Iterative solver exhausted its iteration budget before reaching tolerance."""


class AccuracyError(RuntimeError):
    """Quadrature finished but could not certify the requested accuracy."""

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
