import math

import numpy as np
import pytest

from licore.cell import (
    AbsorptionDataset,
    CellConfig,
    calibrate_g0,
    detuning_scan,
    experimental_heat_current,
    integrated_cooling_power,
    load_absorption_csv,
    pick_solver,
    scan_records,
    synthesize_absorption,
    write_scan_csv,
)
from licore.config import AtomDriveConfig
from licore.errors import CalibrationError, ConfigError
from licore.spectra import FlatHotSpectrum
from licore.units import internal_to_watts, kelvin_to_internal, thz_to_internal


def lab_cfg(nu_thz=372.0, g_thz=0.05):
    return AtomDriveConfig.from_thz(377.0, 6e-6, g_thz, nu_thz,
                                    laser_power_w=2.4)


def lab_cell(alpha=1.0 / 9.0, density=2e11):
    return CellConfig(length_mm=10.0, absorption_coeff_per_mm=alpha,
                      linear_atom_density_per_mm=density, laser_power_w=2.4,
                      bath_temperature_k=500.0)


def gaussian_dataset(width=6.0, amax=0.95):
    nus = np.arange(352.0, 402.5, 1.0)
    a = amax * np.exp(-(nus - 377.0) ** 2 / (2 * width ** 2))
    return AbsorptionDataset(tuple(nus), tuple(a))


class TestCellConfig:
    def test_total_absorption_matches_lab_numbers(self):
        # 10 mm cell with 9 mm absorption length absorbs about two thirds
        cell = lab_cell(alpha=1.0 / 9.0)
        assert cell.total_absorption == pytest.approx(1 - math.exp(-10.0 / 9.0),
                                                      rel=1e-15)
        assert cell.total_absorption == pytest.approx(0.67, abs=0.01)

    def test_validation(self):
        with pytest.raises(ValueError):
            CellConfig(0.0, 0.1, 1e12, 2.4, 500.0)
        with pytest.raises(ValueError):
            CellConfig(10.0, 0.1, 1e12, 0.0, 500.0)


class TestQuadrature:
    def test_constant_integrand_closed_form(self):
        cell = lab_cell(alpha=0.2, density=3e11)
        cfg = lab_cfg()
        hot = FlatHotSpectrum(1e10, kelvin_to_internal(500.0))
        j_const = 2.5e18  # internal units
        total = integrated_cooling_power(cell, cfg, hot,
                                         local_current=lambda att: j_const)
        n_atoms = cell.linear_atom_density_per_mm * cell.length_mm
        alpha_l = 0.2 * cell.length_mm
        expected = internal_to_watts(
            n_atoms * j_const * (1 - math.exp(-alpha_l)) / alpha_l)
        assert total == pytest.approx(expected, rel=1e-8)

    def test_no_attenuation_reduces_to_atom_count(self):
        cell = lab_cell(alpha=0.0)
        cfg = lab_cfg()
        hot = FlatHotSpectrum(1e10, kelvin_to_internal(500.0))
        j_const = 1.7e18
        total = integrated_cooling_power(cell, cfg, hot, alpha_per_mm=0.0,
                                         local_current=lambda att: j_const)
        n_atoms = cell.linear_atom_density_per_mm * cell.length_mm
        assert total == pytest.approx(internal_to_watts(n_atoms * j_const),
                                      rel=1e-10)


class TestExperimentalCurrent:
    def test_no_absorption_no_current(self):
        assert experimental_heat_current(2.4, 0.0, 1.0, 365.0) == 0.0

    def test_lab_numbers(self):
        # 2.4 W, 67% absorbed at 365 THz, red-detuned from the 377 THz line
        delta = 377.0 - 365.0
        j = experimental_heat_current(2.4, 0.67, delta, 365.0)
        assert j == pytest.approx(2.4 * 0.67 * 12.0 / 365.0, rel=1e-15)
        assert j > 0

    def test_blue_detuning_heats(self):
        delta = 377.0 - 401.0
        assert experimental_heat_current(2.4, 0.5, delta, 401.0) < 0


class TestDataset:
    def test_loader_round_trip(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("# species: test\nnu_thz,absorption\n"
                        "360.0,0.1\n370.0,0.5\n380.0,0.2\n")
        ds = load_absorption_csv(path)
        assert ds.nu_thz == (360.0, 370.0, 380.0)
        assert ds.metadata == ("species: test",)
        assert ds.absorption_at(365.0) == pytest.approx(0.3)
        assert ds.covers(361.0) and not ds.covers(359.0)

    def test_alpha_inversion(self):
        ds = AbsorptionDataset((360.0, 370.0), (0.5, 0.5))
        alpha = ds.alpha_at(365.0, 10.0)
        assert 1 - math.exp(-alpha * 10.0) == pytest.approx(0.5, rel=1e-12)

    def test_rejects_bad_tables(self):
        with pytest.raises(ConfigError):
            AbsorptionDataset((360.0, 350.0), (0.1, 0.2))
        with pytest.raises(ConfigError):
            AbsorptionDataset((360.0, 370.0), (0.1, 1.5))


class TestCalibration:
    def test_round_trip_on_synthetic_data(self):
        g0_true = 1.2e10
        cfg = lab_cfg()
        cell = lab_cell()
        ds = synthesize_absorption(cfg, cell, g0_true,
                                   (360.0, 365.0, 370.0, 382.0, 390.0))
        assert all(0 < a < 1 for a in ds.absorption)
        result = calibrate_g0(ds, cfg, cell)
        assert result.g0 == pytest.approx(g0_true, rel=1e-6)
        assert result.residual_rms <= 1e-10

    def test_single_reference_row_matched_exactly(self):
        g0_true = 8.0e9
        cfg = lab_cfg()
        cell = lab_cell()
        ds = synthesize_absorption(cfg, cell, g0_true, (365.0, 370.0))
        result = calibrate_g0(ds, cfg, cell, reference_nu_thz=365.0)
        assert len(result.rows_used) == 1
        assert result.rows_used[0][0] == 365.0
        assert result.g0 == pytest.approx(g0_true, rel=1e-9)

    def test_inconsistent_rows_leave_residual(self):
        g0_true = 1.2e10
        cfg = lab_cfg()
        cell = lab_cell()
        ds = synthesize_absorption(cfg, cell, g0_true, (365.0, 370.0))
        bumped = AbsorptionDataset(ds.nu_thz,
                                   (ds.absorption[0],
                                    min(ds.absorption[1] + 0.05, 1.0)))
        result = calibrate_g0(bumped, cfg, cell)
        assert result.residual_rms > 1e-3

    def test_dark_dataset_rejected(self):
        ds = AbsorptionDataset((360.0, 365.0), (0.0, 0.0))
        with pytest.raises(CalibrationError):
            calibrate_g0(ds, lab_cfg(), lab_cell())

    def test_unreachable_absorption_rejected(self):
        # a handful of atoms cannot absorb two thirds of the beam
        ds = AbsorptionDataset((364.0, 365.0, 366.0), (0.6, 0.67, 0.6))
        with pytest.raises(CalibrationError, match="saturated"):
            calibrate_g0(ds, lab_cfg(), lab_cell(density=1e3),
                         reference_nu_thz=365.0)


@pytest.fixture(scope="module")
def calibrated(scan_dataset_path):
    ds = load_absorption_csv(scan_dataset_path)
    cfg = lab_cfg()
    cell = lab_cell()
    g0 = calibrate_g0(ds, cfg, cell, reference_nu_thz=372.0).g0
    return ds, cfg, cell, g0


class TestScan:
    def test_signs_follow_detuning(self, calibrated):
        ds, cfg, cell, g0 = calibrated
        scan = detuning_scan(cell, cfg, g0, [-8.0, -2.0, 2.0, 8.0], dataset=ds)
        for row in scan.rows:
            if row.delta_thz > 0:
                assert row.j_hot_watt > 0 and row.regime == "cooling"
                assert row.j_hot_exp_watt > 0
            else:
                assert row.j_hot_watt < 0 and row.regime == "heating"
                assert row.j_hot_exp_watt < 0

    def test_mirrored_pairs_follow_detailed_balance(self, calibrated):
        ds, cfg, cell, g0 = calibrated
        deltas = [-12.0, -4.0, 4.0, 12.0]
        scan = detuning_scan(cell, cfg, g0, deltas, dataset=ds)
        by_delta = {r.delta_thz: r.j_hot_watt for r in scan.rows}
        t_hot = kelvin_to_internal(500.0)
        for d in (4.0, 12.0):
            ratio = -by_delta[-d] / by_delta[d]
            expected = math.exp(thz_to_internal(d) / t_hot)
            assert ratio == pytest.approx(expected, rel=1e-10)

    def test_current_to_power_identity_on_weak_rows(self, calibrated):
        ds, cfg, cell, g0 = calibrated
        scan = detuning_scan(cell, cfg, g0, [3.0, 9.0, -9.0], dataset=ds)
        for row in scan.rows:
            assert row.model == "rate"
            nu = 377.0 - row.delta_thz
            assert row.j_hot_watt / row.p_abs_watt == \
                pytest.approx(row.delta_thz / nu, rel=1e-12)

    def test_resonant_row_switches_to_exact_solver(self, calibrated):
        ds, cfg, cell, g0 = calibrated
        scan = detuning_scan(cell, cfg, g0, [0.0, 5.0], dataset=ds)
        assert scan.rows[0].model == "floquet"
        assert scan.rows[0].regime == "neutral"
        assert scan.rows[1].model == "rate"

    def test_monotone_increase_near_origin(self):
        # constant attenuation, weak coupling: the model current grows with
        # detuning just right of zero (grid kept below the saturation knee)
        cfg = lab_cfg(g_thz=0.005)
        cell = lab_cell()
        g0 = 1.2e10
        deltas = [0.05 + 0.01 * k for k in range(11)]
        scan = detuning_scan(cell, cfg, g0, deltas)
        currents = [r.j_hot_watt for r in scan.rows]
        assert all(r.model == "rate" for r in scan.rows)
        assert all(a < b for a, b in zip(currents, currents[1:]))

    def test_undriven_rows_flagged_not_fatal(self):
        cfg = lab_cfg(g_thz=0.0)
        scan = detuning_scan(lab_cell(), cfg, 1.2e10, [0.0, 1.0])
        assert [r.model for r in scan.rows] == ["none", "none"]
        assert all(r.j_hot_watt == 0.0 for r in scan.rows)

    def test_empty_grid_rejected(self):
        with pytest.raises(ConfigError):
            detuning_scan(lab_cell(), lab_cfg(), 1.2e10, [])

    def test_experimental_column_empty_outside_dataset(self, calibrated):
        ds, cfg, cell, g0 = calibrated
        scan = detuning_scan(cell, cfg, g0, [40.0], dataset=ds)
        assert scan.rows[0].j_hot_exp_watt is None

    def test_parallel_rows_identical_to_serial(self, calibrated):
        ds, cfg, cell, g0 = calibrated
        deltas = [-6.0, -1.0, 1.0, 6.0]
        serial = detuning_scan(cell, cfg, g0, deltas, dataset=ds, jobs=1)
        parallel = detuning_scan(cell, cfg, g0, deltas, dataset=ds, jobs=3)
        assert serial.rows == parallel.rows

    def test_csv_output_schema(self, calibrated, tmp_path):
        ds, cfg, cell, g0 = calibrated
        scan = detuning_scan(cell, cfg, g0, [40.0, -3.0], dataset=ds)
        path = tmp_path / "scan.csv"
        write_scan_csv(scan, path)
        lines = path.read_text().splitlines()
        assert lines[0] == \
            "delta_thz,j_hot_watt,j_hot_exp_watt,p_abs_watt,eta,regime,model"
        assert lines[1].split(",")[2] == ""  # no data at delta = 40 THz
        records = scan_records(scan)
        assert records[1]["regime"] == "heating"


def test_pick_solver_threshold():
    assert pick_solver(lab_cfg(nu_thz=376.0, g_thz=0.05)) == "rate"
    assert pick_solver(lab_cfg(nu_thz=376.9, g_thz=0.05)) == "floquet"
    assert pick_solver(lab_cfg(nu_thz=377.0, g_thz=0.05)) == "floquet"
