"""From single-atom currents to the laboratory cell.

The beam attenuates as exp(-alpha z) along the cell, the local coupling
scales as g^2(z) = g^2 exp(-alpha z), and the total cooling power is the
attenuation-weighted integral of the local per-atom current times the
linear atom density.  The flat hot-spectrum amplitude is calibrated so the
modeled absorbed-power fraction reproduces measured absorption data.

This module is the lab-facing boundary: cell geometry in mm, power in
watts, frequencies in THz, temperatures in kelvin.  Atom/drive configs it
consumes are in internal units as everywhere else.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, least_squares

from .config import AtomDriveConfig
from .errors import CalibrationError, ConfigError
from .floquet import solve_pipeline
from .rate_model import (
    _absorbed_power_signed,
    heat_current_weak,
    pumping_rate,
    regime_of,
)
from .spectra import CubicColdSpectrum, FlatHotSpectrum, boltzmann_weight
from .units import (
    internal_to_thz,
    internal_to_watts,
    kelvin_to_internal,
    thz_to_internal,
)

WEAK_DRIVE_SWITCH = 0.1     # rate model below g/|detuning| <= 0.1, exact solver above


@dataclass(frozen=True)
class CellConfig:
    """Cell geometry and operating point, in lab units."""

    length_mm: float
    absorption_coeff_per_mm: float
    linear_atom_density_per_mm: float
    laser_power_w: float
    bath_temperature_k: float

    def __post_init__(self):
        if self.length_mm <= 0:
            raise ValueError("length_mm must be positive")
        if self.absorption_coeff_per_mm < 0:
            raise ValueError("absorption coefficient must be non-negative")
        if self.linear_atom_density_per_mm < 0:
            raise ValueError("atom density must be non-negative")
        if self.laser_power_w <= 0:
            raise ValueError("laser power must be positive")
        if self.bath_temperature_k <= 0:
            raise ValueError("bath temperature must be positive")

    @property
    def total_absorption(self) -> float:
        """Beam fraction absorbed over the full cell, 1 - exp(-alpha L)."""
        return -math.expm1(-self.absorption_coeff_per_mm * self.length_mm)


@dataclass(frozen=True)
class AbsorptionDataset:
    """Measured photon absorption probability a(nu) on an increasing
    frequency grid (THz)."""

    nu_thz: tuple
    absorption: tuple
    metadata: tuple = ()

    def __post_init__(self):
        nu = np.asarray(self.nu_thz, dtype=float)
        a = np.asarray(self.absorption, dtype=float)
        if nu.size == 0 or nu.size != a.size:
            raise ConfigError("dataset needs matching nu/absorption columns")
        if not np.all(np.diff(nu) > 0):
            raise ConfigError("dataset frequencies must be strictly increasing")
        if np.any((a < 0) | (a > 1)):
            raise ConfigError("absorption probabilities must lie in [0, 1]")

    def covers(self, nu_thz: float) -> bool:
        return self.nu_thz[0] <= nu_thz <= self.nu_thz[-1]

    def absorption_at(self, nu_thz: float) -> float:
        """Linear interpolation, clamped to the endpoint values outside."""
        return float(np.interp(nu_thz, self.nu_thz, self.absorption))

    def alpha_at(self, nu_thz: float, length_mm: float) -> float:
        """Attenuation coefficient implied by a(nu) via 1 - exp(-alpha L)."""
        a = min(self.absorption_at(nu_thz), 1.0 - 1e-15)
        return -math.log1p(-a) / length_mm


def load_absorption_csv(path) -> AbsorptionDataset:
    """Read ``nu_thz,absorption`` rows; '#'-prefixed lines become metadata."""
    path = Path(path)
    nus, absorptions, meta = [], [], []
    with path.open(newline="") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                meta.append(line.lstrip("# ").rstrip())
                continue
            row = next(csv.reader([line]))
            if row[0].strip().lower() == "nu_thz":
                continue
            try:
                nus.append(float(row[0]))
                absorptions.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise ConfigError(f"bad dataset row {line!r} in {path}") from exc
    return AbsorptionDataset(tuple(nus), tuple(absorptions), tuple(meta))


def experimental_heat_current(p_l_watt: float, a_nu: float, delta: float,
                              nu: float) -> float:
    """Measured-absorption estimate P_L a(nu) detuning/nu, in watts; signed
    (negative for blue detuning).  detuning and nu in any common unit."""
    if not 0.0 <= a_nu <= 1.0:
        raise ValueError("absorption probability must lie in [0, 1]")
    if nu <= 0:
        raise ValueError("nu must be positive")
    return p_l_watt * a_nu * delta / nu


# ---------------------------------------------------------------------------
# Local per-atom currents and their integral over the cell
# ---------------------------------------------------------------------------


def _local_heat_current(cfg_local: AtomDriveConfig, hot: FlatHotSpectrum,
                        t_cold: float, solver: str) -> float:
    if solver == "rate":
        if cfg_local.g == 0.0 or cfg_local.detuning == 0.0:
            return 0.0
        gp = pumping_rate(cfg_local, hot)
        return heat_current_weak(cfg_local, gp, hot.temperature)
    cold = CubicColdSpectrum(cfg_local.gamma, cfg_local.omega0, t_cold)
    _, _, currents = solve_pipeline(cfg_local, hot, cold)
    return currents.j_hot


def _local_absorbed_power(cfg_local: AtomDriveConfig, hot: FlatHotSpectrum,
                          t_cold: float, solver: str) -> float:
    if solver == "rate":
        if cfg_local.g == 0.0 or cfg_local.detuning == 0.0:
            return 0.0
        gp = pumping_rate(cfg_local, hot)
        return _absorbed_power_signed(cfg_local, gp, hot.temperature)
    cold = CubicColdSpectrum(cfg_local.gamma, cfg_local.omega0, t_cold)
    _, _, currents = solve_pipeline(cfg_local, hot, cold)
    return currents.p_abs


def pick_solver(cfg: AtomDriveConfig) -> str:
    """'rate' in the weak-drive regime g/|detuning| <= 0.1, 'floquet' else."""
    delta = abs(cfg.detuning)
    if delta > 0.0 and cfg.g <= WEAK_DRIVE_SWITCH * delta:
        return "rate"
    return "floquet"


def _integrate_over_cell(cell: CellConfig, alpha_per_mm: float, local_fn) -> float:
    """(N_a/L) integral of exp(-alpha z) local_fn(attenuation(z)) dz, where
    local_fn returns an internal per-atom power; result in watts."""
    length = cell.length_mm

    def integrand(z: float) -> float:
        att = math.exp(-alpha_per_mm * z)
        return att * local_fn(att)

    value, _ = quad(integrand, 0.0, length, epsabs=0.0, epsrel=1e-8, limit=200)
    return internal_to_watts(cell.linear_atom_density_per_mm * value)


def integrated_cooling_power(cell: CellConfig, cfg: AtomDriveConfig,
                             hot: FlatHotSpectrum, alpha_per_mm: float | None = None,
                             t_cold: float = 0.0, solver: str | None = None,
                             local_current=None) -> float:
    """Total cooling power of the cell in watts.

    The local current at depth z uses the attenuated coupling
    g^2(z) = g^2 exp(-alpha z); ``local_current`` may override the physical
    per-atom current (used to validate the quadrature against the closed
    form for a z-independent integrand).
    """
    alpha = cell.absorption_coeff_per_mm if alpha_per_mm is None else alpha_per_mm
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    chosen = solver or pick_solver(cfg)
    if local_current is None:
        def local_current(att, _cfg=cfg):
            return _local_heat_current(_cfg.attenuated(att), hot, t_cold, chosen)
    return _integrate_over_cell(cell, alpha, local_current)


# ---------------------------------------------------------------------------
# Calibration of the flat hot-spectrum amplitude
# ---------------------------------------------------------------------------


def _modeled_absorption(cfg: AtomDriveConfig, cell: CellConfig, g0: float,
                        alpha_per_mm: float) -> float:
    """Absorbed-power fraction of the cell predicted by the weak-drive model
    with a flat hot spectrum of amplitude g0."""
    t_hot = kelvin_to_internal(cell.bath_temperature_k)
    hot = FlatHotSpectrum(g0, t_hot) if g0 > 0 else None

    def local_p(att):
        if hot is None:
            return 0.0
        return _local_absorbed_power(cfg.attenuated(att), hot, 0.0, "rate")

    absorbed_w = _integrate_over_cell(cell, alpha_per_mm, local_p)
    return absorbed_w / cell.laser_power_w


def _saturated_absorption(cfg: AtomDriveConfig, cell: CellConfig,
                          alpha_per_mm: float) -> float:
    """Fraction reached as g0 -> infinity (pumping saturates everywhere)."""
    t_hot = kelvin_to_internal(cell.bath_temperature_k)
    bw = boltzmann_weight(abs(cfg.detuning), t_hot)
    cap = cfg.nu * cfg.gamma * (bw if cfg.detuning > 0 else 1.0) / (1.0 + bw)
    weight, _ = quad(lambda z: math.exp(-alpha_per_mm * z), 0.0, cell.length_mm,
                     epsabs=0.0, epsrel=1e-10)
    return internal_to_watts(cell.linear_atom_density_per_mm * weight * cap) \
        / cell.laser_power_w


@dataclass(frozen=True)
class CalibrationResult:
    g0: float               # internal rate units
    residual_rms: float     # rms absorption misfit over the rows used
    rows_used: tuple        # (nu_thz, measured absorption) pairs


def _row_root(cfg_row: AtomDriveConfig, cell: CellConfig, alpha: float,
              target: float, g0_seed: float) -> float:
    cap = _saturated_absorption(cfg_row, cell, alpha)
    if target >= cap:
        raise CalibrationError(
            f"absorption {target:.4g} exceeds the saturated model bound "
            f"{cap:.4g}; no spectrum amplitude can reach it"
        )
    hi = g0_seed
    for _ in range(400):
        if _modeled_absorption(cfg_row, cell, hi, alpha) > target:
            break
        hi *= 2.0
    else:
        raise CalibrationError("failed to bracket the calibration root")
    return float(brentq(
        lambda g0: _modeled_absorption(cfg_row, cell, g0, alpha) - target,
        0.0, hi, xtol=1e-300, rtol=1e-14,
    ))


def calibrate_g0(dataset: AbsorptionDataset, cfg_template: AtomDriveConfig,
                 cell: CellConfig, reference_nu_thz: float | None = None,
                 min_absorption: float = 1e-6) -> CalibrationResult:
    """Fit the flat hot-spectrum amplitude to measured absorption.

    With ``reference_nu_thz`` the single nearest row is matched exactly;
    otherwise all rows with usable absorption enter an equally weighted
    least-squares fit.  The attenuation profile per row is taken from the
    measured absorption itself.
    """
    rows = []
    for nu_thz, a in zip(dataset.nu_thz, dataset.absorption):
        delta = cfg_template.omega0 - thz_to_internal(nu_thz)
        # calibration runs through the weak-drive model; rows too close to
        # resonance for it are left out
        if a < min_absorption or delta == 0.0 or cfg_template.g >= abs(delta):
            continue
        rows.append((nu_thz, a))
    if not rows:
        raise CalibrationError("no usable rows: absorption is ~0 everywhere "
                               "or all rows sit at/near resonance")
    if reference_nu_thz is not None:
        nearest = min(rows, key=lambda r: abs(r[0] - reference_nu_thz))
        rows = [nearest]

    per_row = []
    for nu_thz, a in rows:
        cfg_row = cfg_template.with_laser_frequency(thz_to_internal(nu_thz))
        alpha = dataset.alpha_at(nu_thz, cell.length_mm)
        per_row.append(_row_root(cfg_row, cell, alpha, a, cfg_template.gamma))

    if len(rows) == 1:
        g0 = per_row[0]
        resid = abs(_modeled_absorption(
            cfg_template.with_laser_frequency(thz_to_internal(rows[0][0])),
            cell, g0, dataset.alpha_at(rows[0][0], cell.length_mm)) - rows[0][1])
        return CalibrationResult(g0, resid, tuple(rows))

    def residuals(x):
        g0 = math.exp(x[0])
        out = []
        for nu_thz, a in rows:
            cfg_row = cfg_template.with_laser_frequency(thz_to_internal(nu_thz))
            alpha = dataset.alpha_at(nu_thz, cell.length_mm)
            out.append(_modeled_absorption(cfg_row, cell, g0, alpha) - a)
        return out

    x0 = [float(np.mean(np.log(per_row)))]
    fit = least_squares(residuals, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    g0 = math.exp(fit.x[0])
    resid = float(np.sqrt(np.mean(np.square(fit.fun))))
    return CalibrationResult(g0, resid, tuple(rows))


def synthesize_absorption(cfg_template: AtomDriveConfig, cell: CellConfig,
                          g0: float, nus_thz) -> AbsorptionDataset:
    """Self-consistent absorption a(nu) predicted by the model itself:
    a solves a = fraction(alpha(a)).  Round-trips exactly through
    calibrate_g0."""
    if g0 <= 0:
        raise ValueError("g0 must be positive")
    values = []
    for nu_thz in nus_thz:
        nu = thz_to_internal(nu_thz)
        delta = cfg_template.omega0 - nu
        if delta == 0.0 or cfg_template.g >= abs(delta):
            raise ValueError("synthesis rows must stay in the weak-drive "
                             "regime (g < |detuning|)")
        cfg_row = cfg_template.with_laser_frequency(nu)

        def gap(a):
            alpha = -math.log1p(-a) / cell.length_mm
            return _modeled_absorption(cfg_row, cell, g0, alpha) - a

        if gap(0.0) <= 0.0:
            values.append(0.0)
            continue
        values.append(float(brentq(gap, 0.0, 1.0 - 1e-12,
                                   xtol=1e-300, rtol=1e-14)))
    return AbsorptionDataset(tuple(float(n) for n in nus_thz), tuple(values),
                             ("synthetic: self-consistent model absorption",))


# ---------------------------------------------------------------------------
# Detuning scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    delta_thz: float
    j_hot_watt: float
    j_hot_exp_watt: float | None
    p_abs_watt: float
    eta: float
    regime: str
    model: str


@dataclass(frozen=True)
class ScanResult:
    rows: tuple
    metadata: dict


def _scan_row(args) -> ScanRow:
    cell, cfg_template, g0, delta_thz, dataset, t_cold = args
    delta = thz_to_internal(delta_thz)
    nu = cfg_template.omega0 - delta
    if nu <= 0:
        raise ConfigError(f"detuning {delta_thz} THz puts the laser frequency "
                          "at or below zero")
    cfg_row = cfg_template.with_laser_frequency(nu)
    nu_thz = internal_to_thz(nu)
    t_hot = kelvin_to_internal(cell.bath_temperature_k)
    hot = FlatHotSpectrum(g0, t_hot)

    if dataset is not None:
        alpha = dataset.alpha_at(nu_thz, cell.length_mm)
    else:
        alpha = cell.absorption_coeff_per_mm

    regime = regime_of(cfg_row)
    if cfg_row.g == 0.0:
        return ScanRow(delta_thz, 0.0, _experimental(cell, dataset, delta, nu),
                       0.0, 0.0, regime, "none")
    solver = pick_solver(cfg_row)
    j_tot = integrated_cooling_power(cell, cfg_row, hot, alpha_per_mm=alpha,
                                     t_cold=t_cold, solver=solver)
    if solver == "rate":
        # exact weak-drive identity J/P = detuning/nu, pointwise in z
        p_abs = j_tot * nu / delta if delta != 0.0 else 0.0
    else:
        p_abs = _integrate_over_cell(
            cell, alpha,
            lambda att: _local_absorbed_power(cfg_row.attenuated(att), hot,
                                              t_cold, solver))
    eta = j_tot / cell.laser_power_w
    return ScanRow(delta_thz, j_tot, _experimental(cell, dataset, delta, nu),
                   p_abs, eta, regime, solver)


def _experimental(cell: CellConfig, dataset, delta: float, nu: float):
    if dataset is None:
        return None
    nu_thz = internal_to_thz(nu)
    if not dataset.covers(nu_thz):
        return None
    return experimental_heat_current(cell.laser_power_w,
                                     dataset.absorption_at(nu_thz), delta, nu)


def detuning_scan(cell: CellConfig, cfg_template: AtomDriveConfig, g0: float,
                  deltas_thz, dataset: AbsorptionDataset | None = None,
                  t_cold: float = 0.0, jobs: int = 1) -> ScanResult:
    """Sweep the detuning grid (THz); rows come back in grid order.

    g0 is the calibrated (or prescribed) flat hot-spectrum amplitude in
    internal units; the weak-drive/exact solver switch is recorded per row.
    """
    deltas_thz = list(deltas_thz)
    if not deltas_thz:
        raise ConfigError("empty detuning grid")
    if g0 <= 0:
        raise ValueError("g0 must be positive")
    payloads = [(cell, cfg_template, g0, float(d), dataset, t_cold)
                for d in deltas_thz]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_row, payloads))
    else:
        rows = [_scan_row(p) for p in payloads]
    metadata = {
        "g0_internal": g0,
        "g0_thz": internal_to_thz(g0),
        "cell": {
            "length_mm": cell.length_mm,
            "absorption_coeff_per_mm": cell.absorption_coeff_per_mm,
            "linear_atom_density_per_mm": cell.linear_atom_density_per_mm,
            "laser_power_w": cell.laser_power_w,
            "bath_temperature_k": cell.bath_temperature_k,
        },
        "t_cold_internal": t_cold,
        "units": "delta in THz (ordinary); powers in watts; "
                 "g0 internal = rad/s",
        "dataset_rows": 0 if dataset is None else len(dataset.nu_thz),
    }
    return ScanResult(tuple(rows), metadata)


# ---------------------------------------------------------------------------
# Scan serialization
# ---------------------------------------------------------------------------

SCAN_CSV_HEADER = "delta_thz,j_hot_watt,j_hot_exp_watt,p_abs_watt,eta,regime,model"


def _fmt(x) -> str:
    return f"{x:.12g}"


def write_scan_csv(result: ScanResult, path) -> None:
    lines = [SCAN_CSV_HEADER]
    for r in result.rows:
        exp = "" if r.j_hot_exp_watt is None else _fmt(r.j_hot_exp_watt)
        lines.append(",".join([_fmt(r.delta_thz), _fmt(r.j_hot_watt), exp,
                               _fmt(r.p_abs_watt), _fmt(r.eta), r.regime,
                               r.model]))
    Path(path).write_text("\n".join(lines) + "\n")


def scan_records(result: ScanResult) -> list[dict]:
    return [
        {
            "delta_thz": float(_fmt(r.delta_thz)),
            "j_hot_watt": float(_fmt(r.j_hot_watt)),
            "j_hot_exp_watt": None if r.j_hot_exp_watt is None
            else float(_fmt(r.j_hot_exp_watt)),
            "p_abs_watt": float(_fmt(r.p_abs_watt)),
            "eta": float(_fmt(r.eta)),
            "regime": r.regime,
            "model": r.model,
        }
        for r in result.rows
    ]
