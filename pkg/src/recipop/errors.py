"""Exception hierarchy shared by all analysis modules."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ToolkitError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ConfigError(ToolkitError, ValueError):
    """Malformed or inconsistent run configuration."""


class SingularSystemError(ToolkitError):
    """The linear system has no isolated rest point (zero determinant)."""


class DegenerateClassificationError(ToolkitError):
    """Parameters sit on a classification boundary that strict inequalities
    do not cover (e.g. equal self-limitation rates)."""


class BlowUpPassedError(DomainError):
    """Closed-form evaluation requested at or beyond a finite blow-up time."""


class ResonanceError(ToolkitError):
    """The unperturbed rotation completes a whole number of turns per forcing
    period, so the periodic-solution construction is ill-posed."""


class NearResonanceError(ResonanceError):
    """Numerically too close to resonance: the closure system is
    ill-conditioned even though the exact resonance test passed."""


class NumericalFailure(ToolkitError):
    """An iterative numerical procedure failed to converge.

    When raised by the integrator, ``trajectory`` holds the partial result
    accumulated up to the failure.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class NoDataError(ToolkitError):
    """A search produced no usable samples (e.g. every grid point escaped)."""
