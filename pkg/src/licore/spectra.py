"""Bath coupling spectra with detailed balance built in.

Every spectrum is defined for all real frequencies: the positive side is
given by the model, the negative side follows from the KMS relation
G(-w) = exp(-w/T) G(w).  A zero-temperature bath has G(-w) = 0 for w > 0.
"""

from __future__ import annotations

import abc
import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .units import thz_to_internal


def boltzmann_weight(omega: float, temperature: float) -> float:
    """exp(-omega/T) with the T = 0 limit taken exactly (no epsilons)."""
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if temperature == 0.0:
        if omega > 0:
            return 0.0
        if omega == 0:
            return 1.0
        return math.inf
    x = omega / temperature
    if x < -709.0:
        return math.inf
    try:
        return math.exp(-x)
    except OverflowError:
        return math.inf


class BathSpectrum(abc.ABC):
    """Coupling spectrum G(omega) >= 0 at a fixed bath temperature."""

    temperature: float

    @abc.abstractmethod
    def value(self, omega: float) -> float:
        ...

    def __call__(self, omega: float) -> float:
        return self.value(omega)


@dataclass(frozen=True)
class FlatHotSpectrum(BathSpectrum):
    """Constant plateau for omega >= 0, thermally suppressed below zero.

    The flat positive side means collisional coupling is treated as
    detuning-independent within the relevant band.
    """

    plateau: float
    temperature: float

    def __post_init__(self):
        if self.plateau <= 0:
            raise ValueError("plateau must be positive")
        if self.temperature <= 0:
            raise ValueError("hot-bath temperature must be positive")

    def value(self, omega: float) -> float:
        if omega >= 0:
            return self.plateau
        return self.plateau * boltzmann_weight(-omega, self.temperature)


@dataclass(frozen=True)
class CubicColdSpectrum(BathSpectrum):
    """Radiative bath: G(w) = gamma (w/omega0)^3 for w > 0, so that
    G(omega0) = gamma exactly.  temperature = 0 models the vacuum."""

    gamma: float
    omega0: float
    temperature: float = 0.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")

    def value(self, omega: float) -> float:
        if omega == 0:
            return 0.0
        mag = self.gamma * (abs(omega) / self.omega0) ** 3
        if omega > 0:
            return mag
        return mag * boltzmann_weight(-omega, self.temperature)


@dataclass(frozen=True)
class ZeroSpectrum(BathSpectrum):
    """Uncoupled bath; useful for single-bath limits."""

    temperature: float = 0.0

    def value(self, omega: float) -> float:
        return 0.0


@dataclass(frozen=True)
class TabulatedSpectrum(BathSpectrum):
    """Piecewise-linear user spectrum; queries outside the table clamp to
    the endpoint values."""

    omegas: tuple
    values: tuple
    temperature: float

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        va = np.asarray(self.values, dtype=float)
        if om.size < 2 or om.size != va.size:
            raise ConfigError("tabulated spectrum needs >= 2 (omega, value) rows")
        if not np.all(np.diff(om) > 0):
            raise ConfigError("tabulated frequencies must be strictly increasing")
        if np.any(va < 0):
            raise ConfigError("tabulated spectrum values must be non-negative")
        if self.temperature < 0:
            raise ConfigError("temperature must be non-negative")

    def value(self, omega: float) -> float:
        return float(np.interp(omega, self.omegas, self.values))


def kms_violation(spectrum: BathSpectrum, omegas, floor: float = 1e-300) -> float:
    """Max relative defect of G(-w) = exp(-w/T) G(w) over a grid of w > 0."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    if omegas.size == 0:
        raise ValueError("frequency grid must be non-empty")
    if np.any(omegas <= 0):
        raise ValueError("grid frequencies must be positive")
    worst = 0.0
    for w in omegas:
        gp = spectrum.value(w)
        gm = spectrum.value(-w)
        expected = boltzmann_weight(w, spectrum.temperature) * gp
        worst = max(worst, abs(gm - expected) / max(gp, floor))
    return worst


def load_tabulated_spectrum(path, temperature: float,
                            kms_tol: float = 1e-6) -> TabulatedSpectrum:
    """Read a two-column CSV ``omega_thz, g_rate`` (both converted like
    frequencies) and reject it unless detailed balance holds to kms_tol."""
    path = Path(path)
    omegas, values = [], []
    with path.open(newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if row[0].strip().lower() == "omega_thz":
                continue
            try:
                omegas.append(thz_to_internal(float(row[0])))
                values.append(thz_to_internal(float(row[1])))
            except (ValueError, IndexError) as exc:
                raise ConfigError(f"bad spectrum row {row!r} in {path}") from exc
    spec = TabulatedSpectrum(tuple(omegas), tuple(values), temperature)
    grid = [w for w in omegas if w > 0 and -w >= omegas[0]]
    if not grid:
        raise ConfigError(
            f"{path}: table must cover matching +/- frequency pairs for the "
            "detailed-balance check"
        )
    violation = kms_violation(spec, grid)
    if violation > kms_tol:
        raise ConfigError(
            f"{path}: tabulated spectrum violates detailed balance "
            f"(max relative defect {violation:.3e} > {kms_tol:.1e})"
        )
    return spec
