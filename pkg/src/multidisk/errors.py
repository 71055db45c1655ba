"""Exception hierarchy shared by all modules."""


class MultidiskError(Exception):
    """Base class for errors raised by :mod:`multidisk`."""


class DomainError(MultidiskError, ValueError):
    """Raised when a domain description is malformed."""

    def __init__(self, msg, violations=()):
        super().__init__(msg)
        self.violations = list(violations)


class NumericError(MultidiskError):
    """Raised when a numerical kernel cannot produce a trustworthy result."""


class SingularMatrixError(NumericError):
    """Raised when a matrix is singular to the working tolerance."""


class ConvergenceError(NumericError):
    """Raised when an iteration exhausts its budget."""


class PreconditionError(MultidiskError, ValueError):
    """Raised when inputs violate a documented mathematical precondition.

    The offending quantity (an eigenvalue, a norm, ...) is kept in ``value``.
    """

    def __init__(self, msg, value=None):
        super().__init__(msg)
        self.value = value


class PoleError(MultidiskError, ValueError):
    """Raised when a pole lies in the domain or cannot be assigned to a component."""
