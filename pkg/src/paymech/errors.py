"""Exception types shared across the package."""


class Error(Exception):
    """Base class for every error raised by this package."""


class ValidationError(Error):
    """Malformed input: a bad tree, matrix, file, or parameter set."""


class DuplicateNodeId(ValidationError):
    pass


class BadProbabilitySum(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class MissingBranchChoice(ValidationError):
    pass


class UnknownNodeId(ValidationError):
    pass


class BadParameters(ValidationError):
    pass


class PreconditionViolated(ValidationError):
    pass


class NegativeComponent(ValidationError):
    pass


class PatternViolated(ValidationError):
    pass


class NotLeftInvertible(Error):
    """The emission matrix has column rank below the number of leaves."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class TargetNotImplementable(Error):
    """No payment scheme maps the given utilities onto the target."""

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class Infeasible(Error):
    """The requested constraints admit no payment scheme."""

    def __init__(self, message, constraints=None):
        super().__init__(message)
        self.constraints = constraints


class Unbounded(Error):
    """The optimization admits unboundedly good solutions (modeling error)."""


class NumericalBreakdown(Error):
    """A numerical routine lost too much precision to continue safely."""


class NoConstraints(Error):
    """The game generates no deviation constraints, so bounds are undefined."""

    def __init__(self, message, min_max_deposit=None):
        super().__init__(message)
        self.min_max_deposit = min_max_deposit
