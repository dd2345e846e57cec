"""Exception types shared across the package."""


class AddCompError(Exception):
    """Base class for every error raised by addcomp."""


class BudgetExceeded(AddCompError):
    """A value would exceed the configured decimal-digit budget."""

    def __init__(self, what, estimate, budget):
        self.what = what
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"{what}: ~{estimate} digits exceeds budget of {budget}")


class NotDivisible(AddCompError, ArithmeticError):
    def __init__(self, a, b, remainder):
        self.remainder = remainder
        super().__init__(f"{b} does not divide the dividend (remainder {remainder})")


class InvalidIndex(AddCompError, ValueError):
    pass


class ScheduleDomainError(AddCompError, ValueError):
    """An explicit table was evaluated outside the range it defines."""


class EnumerationRefused(AddCompError):
    pass


class CapExceeded(AddCompError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} elements exceed cap {cap}")


class ScheduleRejected(AddCompError, ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"schedule rejected: {report}")


class CoverageFailure(AddCompError):
    def __init__(self, target, diagnostics):
        self.target = target
        self.diagnostics = diagnostics
        super().__init__(f"no verified decomposition of {target}: {diagnostics}")


class InvalidArity(AddCompError, ValueError):
    pass
