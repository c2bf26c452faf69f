"""licore: laser-induced collisional-redistribution cooling of a broadband bath.

Weak-drive rate model, exact Floquet-Lindblad solver, minimal-temperature
analysis and a cell-scale detuning-scan model, with a CLI front end.
"""

from .config import AtomDriveConfig, derived_params
from .errors import (
    CalibrationError,
    ConfigError,
    DegenerateSteadyStateError,
    DomainError,
    LicoreError,
    NoSolutionError,
)
from .spectra import (
    BathSpectrum,
    CubicColdSpectrum,
    FlatHotSpectrum,
    TabulatedSpectrum,
    ZeroSpectrum,
    boltzmann_weight,
    kms_violation,
    load_tabulated_spectrum,
)
from .units import UNITS, UnitSystem, from_internal, to_internal

__version__ = "0.1.0"

__all__ = [
    "AtomDriveConfig",
    "derived_params",
    "BathSpectrum",
    "FlatHotSpectrum",
    "CubicColdSpectrum",
    "TabulatedSpectrum",
    "ZeroSpectrum",
    "boltzmann_weight",
    "kms_violation",
    "load_tabulated_spectrum",
    "UnitSystem",
    "UNITS",
    "to_internal",
    "from_internal",
    "LicoreError",
    "ConfigError",
    "DomainError",
    "NoSolutionError",
    "DegenerateSteadyStateError",
    "CalibrationError",
    "__version__",
]
