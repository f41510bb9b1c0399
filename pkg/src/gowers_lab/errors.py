"""Exception hierarchy shared by the library and the command line front end."""


class GowersLabError(Exception):
    exit_code = 1


class PreconditionError(GowersLabError, ValueError):
    """Input violates a documented precondition (bad spec, wrong arity, ...)."""

    exit_code = 2


class BudgetError(GowersLabError, RuntimeError):
    """The requested computation exceeds the configured operation budget."""

    exit_code = 3

    def __init__(self, message: str, estimated_ops: int | None = None):
        super().__init__(message)
        self.estimated_ops = estimated_ops


class InvariantViolation(GowersLabError, AssertionError):
    """A proven identity failed to hold; this always indicates an implementation bug."""

    exit_code = 4

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
