import json
import os
import subprocess
import sys

import numpy as np
import pytest

import qclab
from qclab.cli import main as cli_main
from qclab.errors import ParseError, ValidationError
from qclab.scenarios import (
    Report,
    Scenario,
    build_map,
    emit_report,
    parse_config,
    run_scenario,
)


def write_config(tmp_path, obj, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


class TestParseConfig:
    def test_minimal_transfer_fills_defaults(self, tmp_path):
        path = write_config(tmp_path, {
            "kind": "transfer", "map": {"kind": "radial_power", "gamma": 1.5}})
        s = parse_config(path)
        assert s.kind == "transfer"
        assert s.mesh == (32, 128)
        assert s.modes == 6
        assert s.beta == 2.0
        assert s.tol == 1e-8

    def test_out_of_range_gamma(self, tmp_path):
        path = write_config(tmp_path, {
            "kind": "transfer", "map": {"kind": "radial_power", "gamma": -1.0}})
        with pytest.raises(ValidationError):
            parse_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, {"kind": "eig", "bogus": 1})
        with pytest.raises(ParseError):
            parse_config(path)

    def test_unknown_map_key_rejected(self, tmp_path):
        path = write_config(tmp_path, {
            "kind": "eig", "map": {"kind": "radial_power", "gamma": 1.5, "x": 2}})
        with pytest.raises(ParseError):
            parse_config(path)

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"kind": "eig",}')
        with pytest.raises(ParseError):
            parse_config(str(path))

    def test_kind_conflict(self, tmp_path):
        path = write_config(tmp_path, {"kind": "eig"})
        with pytest.raises(ParseError):
            parse_config(path, kind="transfer")

    def test_stability_needs_two_maps(self, tmp_path):
        path = write_config(tmp_path, {
            "kind": "stability", "map": {"kind": "radial_power", "gamma": 1.5}})
        with pytest.raises(ValidationError):
            parse_config(path)

    def test_modes_floor(self, tmp_path):
        path = write_config(tmp_path, {"kind": "eig", "modes": 1})
        with pytest.raises(ValidationError):
            parse_config(path)

    def test_composition_descriptor_matches_manual(self, rng):
        desc = {"kind": "composition", "maps": [
            {"kind": "inverse", "of": {"kind": "radial_power", "gamma": 1.2}},
            {"kind": "mobius", "b": [0.3, 0.0]},
        ]}
        built = build_map(desc)
        manual = qclab.compose_maps(
            qclab.invert_map(qclab.make_radial_power(1.2)), qclab.make_mobius(0.3))
        pts = 0.9 * built.domain.sample_points(2, 5)
        assert np.abs(built.forward(pts) - manual.forward(pts)).max() < 1e-14


class TestPipelines:
    def test_transfer_identity_map_agrees_exactly(self):
        s = Scenario(kind="transfer", map_descriptors=({"kind": "affine_stretch", "a": 1.0},),
                     mesh=(8, 32), modes=4)
        report = run_scenario(s)
        assert report.passed
        assert max(r["abs_diff"] for r in report.rows) < 1e-10

    def test_eig_rows_and_zero_mode(self):
        s = Scenario(kind="eig", mesh=(8, 32), modes=4)
        report = run_scenario(s)
        assert len(report.rows) == 4
        assert report.rows[0]["mu_disc_weighted"] == pytest.approx(0.0, abs=1e-10)
        assert report.passed

    def test_isospectral_rejects_non_unit_jacobian(self):
        s = Scenario(kind="isospectral",
                     map_descriptors=({"kind": "radial_power", "gamma": 1.5},),
                     mesh=(8, 32), modes=4)
        with pytest.raises(ValidationError):
            run_scenario(s)

    def test_roundtrip_battery_passes(self):
        report = run_scenario(Scenario(kind="roundtrip"))
        assert report.passed
        checks = [r["check"] for r in report.rows]
        assert "beltrami_matrix_roundtrip" in checks


class TestEmit:
    def make_report(self):
        return Report(
            kind="eig",
            scenario={"kind": "eig"},
            columns=["mode_index", "mu_domain", "mu_disc_weighted", "abs_diff",
                     "rel_diff", "rhs_sharp", "rhs_coarse", "rhs_main", "pass"],
            rows=[],
            summary={"max_rel_diff": 0.0, "min_margin": 0.0, "all_pass": True},
        )

    def test_empty_rows_header_and_summary_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_report(self.make_report(), "csv", str(path))
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("mode_index,")
        assert lines[1].startswith("summary,")

    def test_transfer_csv_has_five_data_rows(self, tmp_path):
        s = Scenario(kind="transfer",
                     map_descriptors=({"kind": "inverse", "of": {"kind": "radial_power", "gamma": 1.5}},),
                     mesh=(16, 64), modes=6)
        report = run_scenario(s)
        path = tmp_path / "transfer.csv"
        emit_report(report, "csv", str(path))
        lines = path.read_text().splitlines()
        assert len(lines) == 1 + 5 + 1  # header, modes 2..6, summary
        assert all(r["rel_diff"] < 0.015 for r in report.rows)

    def test_json_round_trip(self, tmp_path):
        s = Scenario(kind="eig", mesh=(4, 16), modes=3)
        report = run_scenario(s)
        path = tmp_path / "r.json"
        emit_report(report, "json", str(path))
        back = Report.from_json(path.read_text())
        assert back == report

    def test_determinism_byte_identical(self, tmp_path):
        s = Scenario(kind="eig", mesh=(8, 32), modes=4, seed=3)
        paths = []
        for i in range(2):
            report = run_scenario(s)
            p = tmp_path / f"run{i}.csv"
            emit_report(report, "csv", str(p))
            paths.append(p.read_bytes())
        assert paths[0] == paths[1]


class TestCli:
    def test_pass_run_exit_zero(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "kind": "eig", "mesh": [8, 32], "modes": 4})
        out = str(tmp_path / "out.csv")
        code = cli_main(["eig", "--config", cfg, "--out", out])
        assert code == 0
        assert os.path.exists(out)
        assert "pass" in capsys.readouterr().out

    def test_flag_overrides(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "eig"})
        out = str(tmp_path / "out.json")
        code = cli_main(["eig", "--config", cfg, "--out", out,
                         "--format", "json", "--mesh", "8,32", "--modes", "3", "--seed", "5"])
        assert code == 0
        report = Report.from_json(open(out).read())
        assert report.scenario["mesh"] == [8, 32]
        assert report.scenario["modes"] == 3
        assert report.scenario["seed"] == 5

    def test_parse_error_exit_two(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "eig", "bogus": True})
        assert cli_main(["eig", "--config", cfg]) == 2

    def test_missing_file_exit_two(self, tmp_path):
        assert cli_main(["eig", "--config", str(tmp_path / "absent.json")]) == 2

    def test_usage_error_exit_two(self):
        assert cli_main(["not-a-kind", "--config", "x.json"]) == 2

    def test_failed_assertion_exit_one(self, tmp_path):
        # an absurdly tight comparison tolerance forces pass flags false
        cfg = write_config(tmp_path, {
            "kind": "transfer",
            "map": {"kind": "inverse", "of": {"kind": "radial_power", "gamma": 1.5}},
            "mesh": [8, 32], "modes": 3, "rel_tol": 1e-12})
        assert cli_main(["transfer", "--config", cfg]) == 1

    def test_scenario_list_with_thread_cap(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path, [
            {"kind": "eig", "mesh": [4, 16], "modes": 3},
            {"kind": "eig", "mesh": [4, 16], "modes": 3, "seed": 1},
        ])
        outdir = str(tmp_path / "reports")
        monkeypatch.setenv("LAB_THREADS", "2")
        code = cli_main(["eig", "--config", cfg, "--out", outdir])
        assert code == 0
        assert sorted(os.listdir(outdir)) == ["scenario_000.csv", "scenario_001.csv"]

    def test_console_script_installed(self):
        out = subprocess.run([sys.executable, "-m", "qclab.cli", "--help"],
                             capture_output=True, text=True)
        assert out.returncode == 0
        assert "scenario" in out.stdout
