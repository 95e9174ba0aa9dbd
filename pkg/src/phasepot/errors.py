"""Exception types shared across the package."""


class PhasePotError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PhasePotError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(PhasePotError, ArithmeticError):
    """Evaluation requested too close to a zero of the Wronskian.

    Attributes
    ----------
    x : float
        Abscissa at which evaluation was attempted.
    nearest_root : float or None
        Closest detected Wronskian root, when one could be located.
    """

    def __init__(self, message, x=None, nearest_root=None):
        super().__init__(message)
        self.x = x
        self.nearest_root = nearest_root


class BranchSelectionError(PhasePotError, ValueError):
    """No admissible interpolating-order branch exists for the request.

    Attributes
    ----------
    candidates : tuple
        All (n, L) candidates that were inspected before giving up.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class ConvergenceError(PhasePotError, RuntimeError):
    """An iterative or sampled computation failed to reach its target accuracy."""
