"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DomainError and
its subclasses -> 3, I/O failures -> 4.
"""


class LicoreError(Exception):
    pass


class ConfigError(LicoreError):
    """Invalid configuration document or rejected input file."""


class DomainError(LicoreError):
    """Valid-looking input outside the domain of a formula or solver."""


class NoSolutionError(DomainError):
    """A requested root or fixed point does not exist for these parameters."""


class DegenerateSteadyStateError(DomainError):
    """The Liouvillian kernel is not one-dimensional."""


class CalibrationError(DomainError):
    """Absorption data cannot be matched by the spectrum model."""
