"""Exception hierarchy shared by every dfw module."""


class DFWError(Exception):
    """Base class for all dfw errors."""


class DomainError(DFWError, ValueError):
    """Argument outside the domain of a function or kernel."""


class SingularityError(DomainError):
    """A singular kernel was evaluated at (or a transform hit) zero distance."""


class ShapeError(DFWError, ValueError):
    """Mismatched array shapes or point dimensions."""


class NumericalError(DFWError, ArithmeticError):
    """Numerical failure: overflow, non-convergence or a rank-zero system."""


class NumericalOverflowError(NumericalError, OverflowError):
    """Result exceeds the representable floating point range."""


class ConvergenceError(NumericalError):
    """An iterative evaluation failed to converge."""


class RankError(NumericalError):
    """A least-squares system has numerical rank zero."""
