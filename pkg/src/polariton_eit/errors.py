"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for all workbench-specific errors."""


class ConfigError(WorkbenchError):
    """Bad or missing configuration value; message names the offending key."""


class SpectrumFormatError(WorkbenchError):
    """Malformed spectrum or manifest file; message carries the row number."""


class DegenerateAngleError(WorkbenchError):
    """Mixing angle undefined: zero drive strength together with zero detuning."""


class SingularSystemError(WorkbenchError):
    """Steady-state linear system is singular or too ill-conditioned to trust."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition  # estimate of cond(A), may be inf


class NonPhysicalStateError(WorkbenchError):
    """Density matrix violates hermiticity, unit trace or positivity tolerances."""


class DegenerateDataError(WorkbenchError):
    """Spectrum carries no usable feature to seed a fit from."""


class MismatchedDataError(WorkbenchError):
    """Fit results being compared were not produced from the same data."""


class ZeroDelayError(WorkbenchError):
    """Group velocity requested for a vanishing group delay."""


class MissingFitError(WorkbenchError):
    """Group-delay command needs a converged EIT fit that the input lacks."""
