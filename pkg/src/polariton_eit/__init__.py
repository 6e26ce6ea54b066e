"""Nested-polariton EIT workbench.

Dressed-level construction for a driven dispersive qubit-cavity pair, a
three-level Lindblad steady-state solver with a transmission mapping,
EIT/ATS line-shape fitting with AIC model weights and group-delay
extraction, and a CLI that batches it all into reproducible runs.
"""

from .errors import (
    ConfigError,
    DegenerateAngleError,
    DegenerateDataError,
    MismatchedDataError,
    MissingFitError,
    NonPhysicalStateError,
    SingularSystemError,
    SpectrumFormatError,
    WorkbenchError,
    ZeroDelayError,
)
from .polariton import (
    DeviceParams,
    MixingAngles,
    PolaritonDrive,
    PolaritonSystem,
    TransitionCurves,
    block_hamiltonians,
    build_polaritons,
    eit_condition,
    in_nesting_regime,
    mixing_angles,
    transition_curves,
)
from .lindblad import (
    ComplexSpectrum,
    DensityMatrix3,
    LambdaConfig,
    SpectrumPoint,
    TransmissionMapping,
    build_hamiltonian,
    build_liouvillian,
    collapse_operators,
    dark_state_fidelity,
    fidelity_scan,
    probe_sweep,
    steady_state,
)
from .fitting import (
    AicReport,
    AtsModelParams,
    BaselineParams,
    EitModelParams,
    FitResult,
    aic_weights,
    eval_ln_s21,
    eval_susceptibility,
    fit_model,
    group_delay,
    group_velocity,
    model_group_delay,
    model_spectrum,
)
from .spectrum_io import (
    add_noise,
    read_manifest,
    read_spectrum,
    remove_electric_delay,
    write_spectrum,
)
from .config import WorkbenchConfig, build_lambda, load_config
from .units import from_angular, to_angular

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "WorkbenchError", "ConfigError", "SpectrumFormatError",
    "DegenerateAngleError", "SingularSystemError", "NonPhysicalStateError",
    "DegenerateDataError", "MismatchedDataError", "ZeroDelayError",
    "MissingFitError",
    # polariton construction
    "DeviceParams", "PolaritonDrive", "MixingAngles", "PolaritonSystem",
    "TransitionCurves", "mixing_angles", "block_hamiltonians",
    "build_polaritons", "transition_curves", "in_nesting_regime",
    "eit_condition",
    # lambda system
    "LambdaConfig", "DensityMatrix3", "TransmissionMapping", "SpectrumPoint",
    "ComplexSpectrum", "build_hamiltonian", "collapse_operators",
    "build_liouvillian", "steady_state", "probe_sweep",
    "dark_state_fidelity", "fidelity_scan",
    # fitting
    "BaselineParams", "EitModelParams", "AtsModelParams", "FitResult",
    "AicReport", "eval_susceptibility", "eval_ln_s21", "model_spectrum",
    "fit_model", "aic_weights", "group_delay", "group_velocity",
    "model_group_delay",
    # io / config
    "read_spectrum", "write_spectrum", "add_noise", "remove_electric_delay",
    "read_manifest", "WorkbenchConfig", "load_config", "build_lambda",
    "to_angular", "from_angular",
]
