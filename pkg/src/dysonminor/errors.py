"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class DysonMinorError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(DysonMinorError, ValueError):
    """A quadrature / solver configuration is unusable (e.g. too few nodes)."""


class DegreeOverflowError(DysonMinorError, ValueError):
    """Requested polynomial degree exceeds the basis' max_degree."""


class ConvergenceError(DysonMinorError):
    """A truncated series failed its tail test.

    Carries the partial sum accumulated so far in ``partial``.
    """

    def __init__(self, message, partial=None, terms=None):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


class TruncationError(DysonMinorError):
    """A truncated contour's estimated tail exceeds the tolerance."""


class ConditioningError(DysonMinorError):
    """A linear system is too ill-conditioned to trust.

    ``condition`` holds the estimated condition number when available.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NumericalError(DysonMinorError):
    """An eigenvalue or linear-algebra iteration failed to converge."""
