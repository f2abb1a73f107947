"""Exception hierarchy shared by all modules."""


class NonarchError(Exception):
    """Base class for every error raised by this package."""


class UsageError(NonarchError, ValueError):
    """Bad arguments: wrong lengths, mismatched fields, unsupported shapes."""


class DomainError(NonarchError, ValueError):
    """Input lies outside the domain of a map (e.g. beta applied off O)."""


class PrecisionError(NonarchError, ArithmeticError):
    """The requested quantity is not determined at the available precision."""


class DegenerateInputError(NonarchError, ValueError):
    """Coincident points handed to a divided difference."""


class IterationBudgetError(NonarchError, RuntimeError):
    """An iterative procedure failed to stabilize within its budget."""


class FieldZeroDivision(NonarchError, ZeroDivisionError):
    """Inversion of zero in F_q."""
