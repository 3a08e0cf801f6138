"""Exception hierarchy shared by the solvers."""


class BOSError(Exception):
    """Base class for every error raised by :mod:`bosspec`."""


class DomainError(BOSError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ConvergenceError(BOSError, RuntimeError):
    """An iterative procedure exhausted its budget without converging."""


class IntegrationError(ConvergenceError):
    """The adaptive ODE integrator could not reach the end of the interval."""


class BracketError(ConvergenceError):
    """A root could not be enclosed, or a supplied bracket has no sign change."""


class InstabilityError(ConvergenceError):
    """A recurrence result changed by more than its tolerance under refinement."""


class TailNotConverged(ConvergenceError):
    """A truncated power series has a tail above the requested tolerance."""
