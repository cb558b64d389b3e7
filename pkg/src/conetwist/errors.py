"""Exception hierarchy.

Two families are distinguished because the command-line driver maps them to
different exit codes: a :class:`PreconditionError` means the inputs violate a
hypothesis of the requested operation (exit code 1), a :class:`NumericalError`
means a computation ran but its result failed a residual or convergence check
(exit code 2).
"""


class ConeTwistError(Exception):
    """Base class for all package errors."""


class PreconditionError(ConeTwistError, ValueError):
    """Inputs violate a documented precondition."""


class NumericalError(ConeTwistError, ArithmeticError):
    """A residual, alignment or convergence check failed."""


class SingularMatrixError(PreconditionError):
    """Determinant too close to zero to invert or renormalize."""


class DegenerateError(PreconditionError):
    """Input sits on a degenerate locus (central element, reducible pair, ...)."""


class ReducibleError(PreconditionError):
    """An irreducibility hypothesis fails."""


class NotConjugateError(NumericalError):
    """Two tuples of matrices are not simultaneously conjugate within tolerance."""


class ChartError(NumericalError):
    """A character lies outside the domain of a coordinate chart."""
