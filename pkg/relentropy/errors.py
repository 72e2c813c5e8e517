"""Exception hierarchy and the CLI exit-code contract."""

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2


class RelentropyError(Exception):
    """Base class for every error raised by relentropy."""

    exit_code = EXIT_USAGE


class DomainError(RelentropyError, ValueError):
    """An argument lies outside the domain of the requested quantity.

    Args:
        message: Human-readable description
        boundary: Optional boundary value of the violated domain (e.g. n/2
            for the MGF argument)
    """

    def __init__(self, message, boundary=None):
        super(DomainError, self).__init__(message)
        self.boundary = boundary


class ShapeError(RelentropyError, ValueError):
    """Paired vectors have different alphabet sizes."""


class BudgetError(RelentropyError, RuntimeError):
    """Exact enumeration would exceed the composition budget."""

    def __init__(self, count, budget):
        super(BudgetError, self).__init__(
            'enumeration needs {:,} compositions, budget is {:,}'.format(count, budget))
        self.count = count
        self.budget = budget


class VerificationFailure(RelentropyError):
    """A certified inequality was violated.

    Attributes:
        violations: pandas.DataFrame with the failing rows
    """

    exit_code = EXIT_VERIFICATION

    def __init__(self, message, violations=None):
        super(VerificationFailure, self).__init__(message)
        self.violations = violations
