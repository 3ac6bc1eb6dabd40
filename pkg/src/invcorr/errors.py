"""Exception hierarchy shared by every module."""


class InvCorrError(Exception):
    """Base class for all library errors."""


class DomainError(InvCorrError, ValueError):
    pass


class EmptyResult(InvCorrError):
    pass


class InsufficientPrefix(InvCorrError):
    pass


class NonStationary(InvCorrError):
    pass


class NoUniqueStationary(InvCorrError):
    pass


class WeightError(InvCorrError, ValueError):
    pass


class DegenerateOracle(InvCorrError):
    pass


class SupportTooLarge(InvCorrError):
    pass


class ScheduleTooShort(InvCorrError):
    pass


class LengthTooSmall(InvCorrError):
    pass


class AuditFailure(InvCorrError):
    """Raised when an oracle violates additivity or shift invariance.

    ``report`` carries the full audit, ``violations`` the offending patterns.
    """

    def __init__(self, report):
        self.report = report
        self.violations = report.violations
        super().__init__(f"invariance audit failed at {self.violations[:8]!r}")


class VerifyFailure(InvCorrError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class GenericityFailure(VerifyFailure):
    pass


class BudgetExceeded(InvCorrError):
    """No candidate fits within the length budget.

    ``best_error`` is the smallest certified error seen (``None`` if no
    candidate was tried at all); ``details`` holds extra certificate data.
    """

    def __init__(self, message, best_error=None, details=None):
        self.best_error = best_error
        self.details = details or {}
        super().__init__(message)


class SpecParseError(InvCorrError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
