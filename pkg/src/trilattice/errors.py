"""Exception hierarchy shared by every module."""


class TrilatticeError(Exception):
    pass


class InvalidWalk(TrilatticeError, ValueError):
    """Raised when six step probabilities fail a walk condition."""


class NegativeProbability(InvalidWalk):
    pass


class MassNotOne(InvalidWalk):
    pass


class DriftNotZero(InvalidWalk):
    pass


class DegenerateCovariance(InvalidWalk):
    pass


class DomainError(TrilatticeError, ValueError):
    pass


class NonConvergence(TrilatticeError, RuntimeError):
    pass


class CapacityExceeded(TrilatticeError, RuntimeError):
    pass


class NotPeriodic(TrilatticeError, ValueError):
    pass


class PeriodicityViolated(TrilatticeError, ValueError):
    pass


class InsufficientGrid(TrilatticeError, ValueError):
    pass


class QuadratureFailure(TrilatticeError, RuntimeError):
    pass
