"""Exception hierarchy shared by all packages.

Errors that should terminate a CLI run carry an ``exit_code``; ``main.py``
turns them into the process status.
"""


class GDVAEError(Exception):
    """Base class for library errors."""

    exit_code: int = 1

    def __reduce__(self):
        # Subclasses take extra constructor arguments; rebuild from args and attributes.
        return _rebuild_error, (type(self), self.args, dict(self.__dict__))


def _rebuild_error(cls, args, state):
    error = Exception.__new__(cls)
    error.args = args
    error.__dict__.update(state)
    return error


class ConfigError(GDVAEError):
    """Invalid run configuration or dataset specification."""

    exit_code = 2

    def __init__(self, message: str, field_path: str | None = None):
        self.field_path = field_path
        if field_path:
            message = f"{field_path}: {message}"
        super().__init__(message)


class ParameterRangeError(ConfigError, ValueError):
    """An initial-condition or model parameter lies outside its domain."""


class SolverError(GDVAEError):
    """A PDE/ODE solver failed (blow-up, underflow, instability)."""

    exit_code = 3


class ZeroMeanError(SolverError, ValueError):
    """Cole-Hopf input without zero spatial mean."""


class ColeHopfTruncationError(SolverError):
    """A truncated Cole-Hopf expansion lost positivity of phi."""


class TrainingDivergedError(GDVAEError):
    """Non-finite loss during training."""

    exit_code = 4

    def __init__(self, message: str, term: str, epoch: int | None = None):
        self.term = term
        self.epoch = epoch
        super().__init__(message)


class MissingArtifactError(GDVAEError):
    """A checkpoint, dataset or ROM required by a command is absent."""

    exit_code = 5


class MissingTrialError(MissingArtifactError):
    """An evaluation was asked for a trial that has no trained artifact."""

    def __init__(self, message: str, trials: list[int] | None = None):
        self.trials = trials or []
        super().__init__(message)


# diffcore


class ShapeError(GDVAEError, ValueError):
    """Operand extents do not conform."""


class ExtentMismatchError(ShapeError):
    """A custom-gradient Jacobian does not match its node's extents."""


class NonFiniteError(GDVAEError, FloatingPointError):
    """A tensor or gradient holds NaN/Inf."""


# manifold


class ProjectionError(GDVAEError):
    """Nearest-point projection did not converge."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(message)


class SingularJacobianError(ProjectionError):
    """The implicit-function Jacobian is singular (w near the medial set)."""

    def __init__(self, message: str, condition: float, residual: float = 0.0):
        self.condition = condition
        super().__init__(message, residual)


# analysis


class ZeroNormError(GDVAEError, ValueError):
    """Relative error requested against an all-zero reference."""
