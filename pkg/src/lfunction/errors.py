"""Exception hierarchy shared by every module."""


class LFunctionError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(LFunctionError, ValueError):
    pass


class ConstraintError(PreconditionError):
    """A 7-tuple does not lie on the hyperplane e+f+g-a-b-c-d = 1."""


class PoleError(PreconditionError):
    """A gamma argument sits on (or too close to) a pole."""

    def __init__(self, message, argument=None):
        super().__init__(message)
        self.argument = argument


class DivergentSeries(PreconditionError):
    pass


class ContourError(PreconditionError):
    """No straight vertical contour separates the two pole families."""


class NonConvergedError(LFunctionError, ArithmeticError):
    pass


class CancellationError(LFunctionError, ArithmeticError):
    """Too many digits were lost when subtracting nearly equal terms."""


class CapExceeded(LFunctionError, RuntimeError):
    pass


class NotInGroup(LFunctionError, ValueError):
    pass


class NoTransporter(LFunctionError, ValueError):
    pass


class InvalidTriple(LFunctionError, ValueError):
    pass


class SamplingExhausted(LFunctionError, RuntimeError):
    pass
