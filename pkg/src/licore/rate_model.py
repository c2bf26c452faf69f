"""Closed-form weak-drive model for the collisionally pumped two-level atom.

Valid for |detuning| >> g.  The cooling branch (detuning > 0) carries a
thermal suppression factor exp(-detuning/T_hot) that the heating branch
(detuning < 0) lacks; that asymmetry is what makes heating easier than
cooling.  Everything here is a pure function of scalar inputs in internal
units; the exact Floquet solver (licore.floquet) is the oracle these
formulas are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import AtomDriveConfig
from .errors import DomainError
from .spectra import BathSpectrum, boltzmann_weight


def check_weak_drive(cfg: AtomDriveConfig) -> None:
    """Reject inputs grossly outside the |detuning| >> g expansion.

    g/|detuning| up to ~0.1 is treated as advisory (validated against the
    exact solver); g >= |detuning| is rejected outright.
    """
    delta = cfg.detuning
    if delta == 0.0:
        raise DomainError(
            "weak-drive formulas are singular at zero detuning; "
            "use licore.floquet at resonance"
        )
    if cfg.g >= abs(delta):
        raise DomainError(
            f"coupling g = {cfg.g:.4g} is not small against the detuning "
            f"{delta:.4g}; the weak-drive expansion does not apply, "
            "use licore.floquet"
        )


def pumping_rate(cfg: AtomDriveConfig, hot: BathSpectrum) -> float:
    """Collision-induced pumping rate (2g/detuning)^2 G_hot(|detuning|)."""
    check_weak_drive(cfg)
    return (2.0 * cfg.g / cfg.detuning) ** 2 * hot.value(abs(cfg.detuning))


@dataclass(frozen=True)
class RatePoint:
    """Stationary point of the two-level rate equations."""

    gamma_p: float
    boltzmann_factor: float     # rho_ee / rho_gg
    t_tla: float                # effective atom temperature; inf if inverted
    rho_ee: float
    rho_gg: float


def steady_state(cfg: AtomDriveConfig, gamma_p: float, t_hot: float) -> RatePoint:
    """Stationary populations and effective temperature.

    Cooling branch: rho_ee/rho_gg = gamma_p e^(-detuning/T) / (gamma_p + gamma),
    always below the bath Boltzmann factor.  Heating branch: the spontaneous
    channel feeds the ratio (gamma_p e^(-|detuning|/T) + gamma) / gamma_p,
    which may exceed one (population inversion; t_tla reported as inf).
    """
    if gamma_p < 0:
        raise ValueError("gamma_p must be non-negative")
    if t_hot <= 0:
        raise ValueError("t_hot must be positive")
    check_weak_drive(cfg)
    delta = cfg.detuning
    bw = boltzmann_weight(abs(delta), t_hot)
    if delta > 0:
        if gamma_p == 0.0:
            ratio = 0.0
            t_tla = 0.0
        else:
            ratio = gamma_p * bw / (gamma_p + cfg.gamma)
            # log1p form keeps t_tla stable for detuning/T << 1
            t_tla = delta / (delta / t_hot + math.log1p(cfg.gamma / gamma_p))
    else:
        if gamma_p == 0.0:
            raise DomainError(
                "population inversion undefined: no pumping on the heating "
                "branch leaves rho_ee/rho_gg divergent"
            )
        ratio = (gamma_p * bw + cfg.gamma) / gamma_p
        t_tla = math.inf if ratio >= 1.0 else -delta / (-math.log(ratio))
    rho_ee = ratio / (1.0 + ratio)
    rho_gg = 1.0 / (1.0 + ratio)
    return RatePoint(gamma_p, ratio, t_tla, rho_ee, rho_gg)


def _denominator(gamma: float, gamma_p: float, bw: float) -> float:
    return gamma + (1.0 + bw) * gamma_p


def heat_current_weak(cfg: AtomDriveConfig, gamma_p: float, t_hot: float) -> float:
    """Heat current out of the hot bath, positive on the cooling branch."""
    if gamma_p < 0:
        raise ValueError("gamma_p must be non-negative")
    if t_hot <= 0:
        raise ValueError("t_hot must be positive")
    delta = cfg.detuning
    if delta == 0.0 or gamma_p == 0.0:
        return 0.0
    check_weak_drive(cfg)
    bw = boltzmann_weight(abs(delta), t_hot)
    den = _denominator(cfg.gamma, gamma_p, bw)
    if delta > 0:
        return delta * gamma_p * cfg.gamma * bw / den
    return delta * gamma_p * cfg.gamma / den


def asymmetry_ratio(cfg: AtomDriveConfig, gamma_p: float, t_hot: float) -> float:
    """-J(-detuning)/J(+detuning); equals exp(detuning/T) for a flat hot
    spectrum, where the pumping rates at +/- detuning coincide."""
    delta = cfg.detuning
    if delta <= 0:
        raise DomainError("asymmetry ratio is defined for positive detuning")
    if gamma_p <= 0:
        raise ValueError("gamma_p must be positive")
    # swapping omega0 and nu negates the detuning bit-exactly
    mirrored = AtomDriveConfig(omega0=cfg.nu, gamma=cfg.gamma, g=cfg.g,
                               nu=cfg.omega0, laser_power=cfg.laser_power)
    j_red = heat_current_weak(cfg, gamma_p, t_hot)
    j_blue = heat_current_weak(mirrored, gamma_p, t_hot)
    return -j_blue / j_red


def absorbed_power_weak(cfg: AtomDriveConfig, gamma_p: float, t_hot: float) -> float:
    """Absorbed laser power per atom on the cooling branch; satisfies
    J_hot / P_abs = detuning / nu exactly."""
    if cfg.detuning <= 0:
        raise DomainError(
            "weak-drive absorbed power is stated for the cooling branch "
            "(detuning > 0) only"
        )
    check_weak_drive(cfg)
    if gamma_p < 0:
        raise ValueError("gamma_p must be non-negative")
    if t_hot <= 0:
        raise ValueError("t_hot must be positive")
    bw = boltzmann_weight(cfg.detuning, t_hot)
    return cfg.nu * gamma_p * cfg.gamma * bw / _denominator(cfg.gamma, gamma_p, bw)


def _absorbed_power_signed(cfg: AtomDriveConfig, gamma_p: float, t_hot: float) -> float:
    """Absorbed power on either branch (positive), via P = J * nu / detuning."""
    check_weak_drive(cfg)
    delta = cfg.detuning
    bw = boltzmann_weight(abs(delta), t_hot)
    den = _denominator(cfg.gamma, gamma_p, bw)
    if delta > 0:
        return cfg.nu * gamma_p * cfg.gamma * bw / den
    return cfg.nu * gamma_p * cfg.gamma / den


def cooling_efficiency(cfg: AtomDriveConfig, gamma_p: float, t_hot: float,
                       laser_power: float) -> float:
    """Total efficiency J_hot / P_laser in the weak-drive limit; equals
    (P_abs/P_laser) * (detuning/nu).  laser_power in internal units."""
    if laser_power <= 0:
        raise ValueError("laser_power must be positive")
    if cfg.detuning < 0:
        raise DomainError("efficiency is defined on the cooling branch")
    if cfg.detuning == 0.0:
        return 0.0
    return heat_current_weak(cfg, gamma_p, t_hot) / laser_power


def regime_of(cfg: AtomDriveConfig) -> str:
    if cfg.detuning == 0.0 or cfg.g == 0.0:
        return "neutral"
    return "cooling" if cfg.detuning > 0 else "heating"


@dataclass(frozen=True)
class EnergyFlowReport:
    """Heat currents, absorbed power and efficiency at one parameter point."""

    j_hot: float
    j_cold: float
    p_abs: float
    eta: float
    regime: str


def energy_flow(cfg: AtomDriveConfig, hot: BathSpectrum,
                laser_power: float | None = None) -> EnergyFlowReport:
    """Weak-drive energy bookkeeping: the cold bath receives everything,
    J_cold = -(J_hot + P_abs)."""
    regime = regime_of(cfg)
    if cfg.g == 0.0 or cfg.detuning == 0.0:
        return EnergyFlowReport(0.0, 0.0, 0.0, 0.0, regime)
    gamma_p = pumping_rate(cfg, hot)
    j_hot = heat_current_weak(cfg, gamma_p, hot.temperature)
    p_abs = _absorbed_power_signed(cfg, gamma_p, hot.temperature)
    eta = j_hot / laser_power if laser_power else 0.0
    return EnergyFlowReport(j_hot, -(j_hot + p_abs), p_abs, eta, regime)
