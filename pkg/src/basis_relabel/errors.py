"""Exception hierarchy shared across the package."""


class MatroidError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MatroidError):
    """An element id is not part of the ground set in question."""


class UsageError(MatroidError):
    """The caller violated an API contract (bad arguments, rank mismatch...)."""


class PreconditionError(MatroidError):
    """A structural precondition does not hold (not a basis, loops present...)."""


class ConnectivityError(PreconditionError):
    """The required connectivity (two disjoint paths, 2-connectedness) is missing."""


class InfeasibleError(MatroidError):
    """The requested reconfiguration is impossible; carries per-label diagnosis."""

    def __init__(self, message, diagnosis=()):
        super().__init__(message)
        self.diagnosis = tuple(diagnosis)


class InvalidStepError(MatroidError):
    """An exchange step cannot be applied; names the violated clause."""

    def __init__(self, reason, index=None):
        super().__init__(reason if index is None else f"step {index}: {reason}")
        self.reason = reason
        self.index = index


class BudgetExceededError(MatroidError):
    """An exact search exceeded its configured budget; names the subroutine."""

    def __init__(self, subroutine, budget):
        super().__init__(f"{subroutine}: search budget {budget} exceeded")
        self.subroutine = subroutine
        self.budget = budget


class ParseError(MatroidError):
    """An instance or sequence file is malformed; carries a line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
