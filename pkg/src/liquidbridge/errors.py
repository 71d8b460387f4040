"""Exception hierarchy shared by the solver modules."""


class BridgeError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(BridgeError, ValueError):
    pass


class OutOfDomainError(BridgeError, ValueError):
    """Query point lies outside the interpolation interval."""


class SingularStateError(BridgeError, ArithmeticError):
    """The profile reached a state where the equations are singular.

    Raised for R <= 0 in the arclength system and for a non-positive
    denominator r*u + sin(phi) in the angle-parametrized system.
    """


class FactorizationError(BridgeError, ArithmeticError):
    pass


class ConvergenceError(BridgeError, RuntimeError):
    """Newton or grid adaptation failed; carries the last report."""

    def __init__(self, message, report=None, state=None):
        super().__init__(message)
        self.report = report
        self.state = state


class TruncationError(BridgeError, RuntimeError):
    """The outer radius exceeded its cap before T stabilized."""


class GridMismatchError(BridgeError, ValueError):
    pass
