import json
import math
from pathlib import Path

import pytest

from licore.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
POINT = str(FIXTURES / "config_point.json")
SCAN = str(FIXTURES / "config_scan.json")
DATASET = str(FIXTURES / "absorption_synthetic.csv")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json", "--no-metadata")
    assert code == 0, err
    return json.loads(out)


class TestSubcommands:
    def test_steady_state_solvers_agree_in_weak_drive(self, capsys):
        # g/detuning = 0.01 with pumping comparable to gamma
        payload = run_json(capsys, "steady-state", "--config", POINT,
                           "--set", "atom.nu_thz=372.0",
                           "--set", "hot_bath.g0_thz=0.02")
        assert payload["floquet"]["rel_difference_rho_ee"] <= 1e-3

    def test_steady_state_undriven(self, capsys):
        payload = run_json(capsys, "steady-state", "--config", POINT,
                           "--set", "atom.g_thz=0.0")
        assert payload["floquet"]["rho_ee"] == pytest.approx(0.0, abs=1e-12)
        assert payload["rate_model"]["gamma_p_thz"] == 0.0

    def test_steady_state_heating_regime(self, capsys):
        payload = run_json(capsys, "steady-state", "--config", POINT,
                           "--set", "atom.nu_thz=387.0")
        # hotter than the bath: the stationary ratio exceeds the bath factor
        assert payload["rate_model"]["boltzmann_factor"] > \
            math.exp(-1.0)  # |detuning|/T ~ 10/10.4 < 1

    def test_currents_conservation_field(self, capsys):
        payload = run_json(capsys, "currents", "--config", POINT)
        assert payload["floquet"]["conservation_residual_rel"] <= 1e-10
        assert payload["regime"] == "cooling"
        assert payload["rate_model"]["j_hot_w"] > 0

    def test_currents_blue_mirror_matches_asymmetry(self, capsys):
        red = run_json(capsys, "currents", "--config", POINT,
                       "--set", "atom.nu_thz=366.6")
        blue = run_json(capsys, "currents", "--config", POINT,
                        "--set", "atom.nu_thz=387.4")
        assert blue["regime"] == "heating"
        ratio = -blue["rate_model"]["j_hot_w"] / red["rate_model"]["j_hot_w"]
        from licore.units import kelvin_to_internal, thz_to_internal
        expected = math.exp(thz_to_internal(10.4) / kelvin_to_internal(500.0))
        assert ratio == pytest.approx(expected, rel=1e-10)

    def test_tmin_report(self, capsys):
        payload = run_json(capsys, "tmin", "--config", POINT)
        assert payload["t_min_exact_k"] == pytest.approx(23.19, abs=0.05)
        bc = payload["bracket_check"]
        assert (bc["j_sign_below"], bc["j_sign_above"]) == (-1, 1)
        assert bc["bisect_rel_difference"] <= 1e-10
        assert payload["relative_gap"] <= 0.10

    def test_tmin_undriven_reports_zero(self, capsys):
        payload = run_json(capsys, "tmin", "--config", POINT,
                           "--set", "atom.g_thz=0.0")
        assert payload["t_min_exact_k"] == 0.0

    def test_compare_cells(self, capsys):
        payload = run_json(capsys, "compare", "--config", POINT)
        cells = {(c["method"], c["regime"]): c["value"]
                 for c in payload["t_min_scaled"]}
        assert cells[("doppler", "resolved")] == 0.25
        assert cells[("licore", "resolved")] == cells[("licore", "unresolved")]
        assert len(payload["efficiency_bounds"]) == 3

    def test_calibrate(self, capsys):
        payload = run_json(capsys, "calibrate", "--config", SCAN)
        assert payload["rows_used"] == 1
        assert payload["g0_thz"] == pytest.approx(0.00868636, rel=1e-5)

    def test_steady_state_with_tabulated_hot_spectrum(self, capsys, tmp_path):
        # a balanced table that is flat at +/-detuning reproduces the flat
        # spectrum's populations
        import math as m
        from licore.units import kelvin_to_internal, thz_to_internal
        t_int = kelvin_to_internal(500.0)
        rows = ["omega_thz,g_rate"]
        for w in (-30.0, -15.0, 0.0, 15.0, 30.0):
            g = 0.002 if w >= 0 else 0.002 * m.exp(thz_to_internal(w) / t_int)
            rows.append(f"{w},{g:.17g}")
        spec_csv = tmp_path / "hot.csv"
        spec_csv.write_text("\n".join(rows) + "\n")
        flat = run_json(capsys, "steady-state", "--config", POINT)
        tab = run_json(capsys, "steady-state", "--config", POINT,
                       "--set", f"hot_bath.spectrum_csv={spec_csv}")
        assert tab["rate_model"]["rho_ee"] == \
            pytest.approx(flat["rate_model"]["rho_ee"], rel=1e-6)

    def test_out_of_regime_rate_model_degrades_gracefully(self, capsys):
        # strong drive: the weak-drive side reports a note, the exact solver
        # still answers
        payload = run_json(capsys, "steady-state", "--config", POINT,
                           "--set", "atom.g_thz=11.0")
        assert "out of regime" in payload["rate_model"]["note"]
        assert 0.0 <= payload["floquet"]["rho_ee"] <= 1.0

    def test_scan_writes_csv_and_json(self, capsys, tmp_path):
        out = tmp_path / "scan"
        code, _, err = run(capsys, "scan", "--config", SCAN,
                           "--set", "scan.delta_min_thz=-3.0",
                           "--set", "scan.delta_max_thz=3.0",
                           "--set", "scan.delta_step_thz=1.0",
                           "--out", str(out), "--no-metadata",
                           "--emit-plot-data")
        assert code == 0, err
        csv_lines = (tmp_path / "scan.csv").read_text().splitlines()
        assert len(csv_lines) == 8  # header + 7 rows
        doc = json.loads((tmp_path / "scan.json").read_text())
        assert "metadata" not in doc
        assert doc["rows"][0]["delta_thz"] == -3.0
        assert (tmp_path / "scan.dat").read_text().startswith("# delta_thz")


class TestExitCodes:
    def test_unknown_config_key_is_schema_error(self, capsys, tmp_path):
        doc = json.loads(Path(POINT).read_text())
        doc["atom"]["coupling_thz"] = 1.0
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        code, _, err = run(capsys, "tmin", "--config", str(bad))
        assert code == 2
        assert "schema" in err

    def test_missing_section_is_config_error(self, capsys, tmp_path):
        doc = {"atom": json.loads(Path(POINT).read_text())["atom"]}
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        code, _, err = run(capsys, "tmin", "--config", str(bad))
        assert code == 2

    def test_blue_detuned_tmin_is_domain_error(self, capsys):
        code, _, err = run(capsys, "tmin", "--config", POINT,
                           "--set", "atom.nu_thz=378.0")
        assert code == 3
        assert "domain error" in err

    def test_missing_dataset_is_io_error(self, capsys):
        code, _, err = run(capsys, "calibrate", "--config", SCAN,
                           "--set", "calibrate.dataset_csv=/nonexistent.csv")
        assert code == 4

    def test_malformed_json_is_config_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "tmin", "--config", str(bad))
        assert code == 2


class TestDeterminism:
    def test_point_commands_byte_stable(self, capsys, tmp_path):
        for command in ("steady-state", "currents", "tmin", "compare"):
            a = tmp_path / "a.json"
            b = tmp_path / "b.json"
            for path in (a, b):
                code, _, err = run(capsys, command, "--config", POINT,
                                   "--format", "json", "--no-metadata",
                                   "--out", str(path))
                assert code == 0, err
            assert a.read_bytes() == b.read_bytes()
