"""Exception types shared across the package."""


class ChacsError(Exception):
    """Base class for errors raised by this package."""


class DivergenceError(ChacsError):
    """A simulated orbit left the divergence bound or became non-finite."""

    def __init__(self, message, step=None, state=None):
        super().__init__(message)
        self.step = step
        self.state = state


class EmptyMeasurementError(ChacsError, ValueError):
    """A downsampling rate too large for the signal left zero measurements."""


class ScalingFailureError(ChacsError):
    """No chaos-preserving scale was found after the allowed halvings."""


class SolverStallError(ChacsError):
    """The damped least-squares solver could not make an acceptable step.

    Carries the last iterate (``alpha``) and, when raised from the outer
    reweighting loop, a partial reconstruction result (``partial``).
    """

    def __init__(self, message, alpha=None, partial=None):
        super().__init__(message)
        self.alpha = alpha
        self.partial = partial
