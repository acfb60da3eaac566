"""Exception hierarchy shared by all modules."""


class GPError(Exception):
    """Base class for every error raised by gpcasimir."""


class DomainError(GPError, ValueError):
    """An argument lies outside the domain of the requested function."""


class PoleProximity(GPError, ArithmeticError):
    """An elliptic ratio was evaluated too close to one of its poles."""

    def __init__(self, message, pole):
        super().__init__(message)
        self.pole = pole


class Singularity(GPError, ArithmeticError):
    """A closed-form expression was evaluated at its singular point."""


class NoCriticalMode(GPError):
    """The parameters are subcritical: there is no unstable mode."""


class NoCriticalRegime(NoCriticalMode):
    """No interval length makes the Robin model critical (kappa <= m)."""


class NoSolution(GPError):
    """A matching condition has no root in the admissible range."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class SingularOperator(GPError, ArithmeticError):
    """The Wronskian of the homogeneous solutions vanishes."""


class CriticalWithoutCondensate(GPError):
    """The analytic subcritical pipeline was called with a critical mode."""


class UnstableSpectrum(GPError):
    """The fluctuation operator has a zero of Phi(i xi) on [m, inf)."""

    def __init__(self, message, zeros=()):
        super().__init__(message)
        self.zeros = list(zeros)


class BranchCrossing(GPError):
    """A finite-difference stencil left the solution branch."""
