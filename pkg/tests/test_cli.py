import csv
import io
import json
import math
import re

import pytest

from micz_su11.cli import main

# every documented README invocation is executed here (paths adapted per test)
README_EXAMPLES = [
    ["spectrum", "--s", "0", "--m", "0", "--j", "0", "--nmax", "3"],
    ["spectrum", "--s", "1/2", "--c1", "1", "--c2", "0", "--m", "1/2", "--j", "1/2", "--nmax", "1"],
    ["verify-algebra", "--deg-check-max", "20"],
]


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestSpectrum:
    def test_hydrogen_three_levels(self, capsys):
        code, out, _ = run(capsys, README_EXAMPLES[0])
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["s", "m", "j", "n", "delta1", "delta2", "J", "K", "E"]
        assert [r[3] for r in rows] == ["1", "2", "3"]
        energies = [float(r[8]) for r in rows]
        assert energies == pytest.approx([-0.5, -0.125, -1.0 / 18.0], rel=1e-15)

    def test_shifted_sector_single_row(self, capsys):
        code, out, _ = run(capsys, README_EXAMPLES[1])
        assert code == 0
        header, rows = parse_csv(out)
        assert len(rows) == 1
        row = dict(zip(header, rows[0]))
        assert row["n"] == "3/2"
        assert float(row["delta1"]) == 2.0
        assert float(row["J"]) == 1.5
        assert float(row["E"]) == pytest.approx(-0.08, rel=1e-15)

    def test_invalid_quantum_numbers_exit_2(self, capsys):
        code, out, err = run(capsys, ["spectrum", "--s", "1", "--m", "0", "--j", "0"])
        assert code == 2
        assert out == ""
        assert err.count("\n") == 1
        assert "m_plus" in err and "j" in err

    def test_bad_half_integer_rejected_by_parser(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["spectrum", "--s", "0.3", "--m", "0", "--j", "0"])
        assert exc.value.code == 2

    def test_json_document(self, capsys):
        code, out, _ = run(capsys, ["spectrum", "--s", "0", "--m", "0", "--j", "0",
                                    "--nmax", "2", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == "su11-micz/1"
        assert doc["config"]["command"] == "spectrum"
        assert [row["E"] for row in doc["rows"]] == [-0.5, -0.125]

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, _, _ = run(capsys, ["spectrum", "--s", "3/2", "--c1", "0.3", "--c2", "0.1",
                                      "--m", "1/2", "--j", "5/2", "--nmax", "8", "--out", str(path)])
            assert code == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()


class TestEigenfunction:
    def test_radial_table(self, capsys, tmp_path):
        out_path = tmp_path / "chi.csv"
        code, _, _ = run(capsys, ["eigenfunction", "--s", "0", "--m", "0", "--j", "0",
                                  "--n", "2", "--npoints", "64", "--out", str(out_path)])
        assert code == 0
        header, rows = parse_csv(out_path.read_text())
        assert header == ["x", "chi", "chi_d1", "chi_d2"]
        assert len(rows) == 64
        x, val = float(rows[10][0]), float(rows[10][1])
        assert val == pytest.approx(2.0 * x * (1.0 - x) * math.exp(-x), rel=1e-12)

    def test_angular_table(self, capsys, tmp_path):
        out_path = tmp_path / "z.csv"
        code, _, _ = run(capsys, ["eigenfunction", "--s", "1/2", "--c1", "1", "--m", "1/2",
                                  "--j", "1/2", "--kind", "angular", "--npoints", "64",
                                  "--out", str(out_path)])
        assert code == 0
        header, rows = parse_csv(out_path.read_text())
        assert header == ["theta", "re_z", "im_z"]
        assert len(rows) == 64
        assert all(float(r[2]) == 0.0 for r in rows)  # m = s: no azimuthal phase

    def test_radial_requires_n(self, capsys):
        code, _, err = run(capsys, ["eigenfunction", "--s", "0", "--m", "0", "--j", "0"])
        assert code == 2
        assert "--n" in err


class TestVerifyAlgebra:
    def test_default_run_passes(self, capsys):
        code, out, _ = run(capsys, ["verify-algebra"])
        assert code == 0
        assert out.count(": 0  PASS") >= 6
        assert "6/6 identities PASS" in out
        assert "oracle sweep k in [-4, 12]: PASS" in out

    def test_deg_check_max_passthrough(self, capsys):
        code, out, _ = run(capsys, README_EXAMPLES[2])
        assert code == 0
        assert "oracle sweep k in [-4, 20]: PASS" in out

    def test_corrupted_build_fails_with_rendered_remainder(self, capsys):
        code, out, err = run(capsys, ["verify-algebra", "--corrupt-identity"])
        assert code == 1
        assert "FAIL" in out
        match = re.search(r"FAILED .*: (.+)", err)
        assert match and match.group(1).strip() not in ("", "0")

    def test_json_report_document(self, capsys, tmp_path):
        out_path = tmp_path / "algebra.json"
        code, _, _ = run(capsys, ["verify-algebra", "--out", str(out_path)])
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["schema"] == "su11-micz/1"
        idents = [r for r in doc["reports"] if r["check_name"].startswith("identity:")]
        assert len(idents) == 6
        assert all(r["passed"] and r["difference"] == "0" for r in idents)


class TestVerifyStates:
    def test_hydrogen_suite_passes(self, capsys, tmp_path):
        out_path = tmp_path / "reports.json"
        code, out, _ = run(capsys, ["verify-states", "--s", "0", "--m", "0", "--j", "0",
                                    "--nmax", "3", "--npoints", "1200", "--out", str(out_path)])
        assert code == 0
        assert "FAIL" not in out
        doc = json.loads(out_path.read_text())
        assert doc["schema"] == "su11-micz/1"
        assert all(r["passed"] for r in doc["reports"])
        names = {r["check_name"] for r in doc["reports"]}
        assert "ladder_annihilation" in names and "t3_spacing" in names

    def test_deterministic_modulo_runtime(self, capsys, tmp_path):
        paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
        for p in paths:
            code, _, _ = run(capsys, ["verify-states", "--s", "1/2", "--c1", "1", "--m", "1/2",
                                      "--j", "1/2", "--nmax", "2", "--npoints", "800",
                                      "--out", str(p)])
            assert code == 0
        texts = [re.sub(r'"runtime_ms": [^,}]+', '"runtime_ms": 0', p.read_text()) for p in paths]
        assert texts[0] == texts[1]

    def test_csv_summary(self, capsys, tmp_path):
        out_path = tmp_path / "reports.csv"
        code, _, _ = run(capsys, ["verify-states", "--s", "0", "--m", "0", "--j", "0",
                                  "--nmax", "2", "--npoints", "800", "--format", "csv",
                                  "--out", str(out_path)])
        assert code == 0
        header, rows = parse_csv(out_path.read_text())
        assert header == ["check_name", "n", "residual", "tolerance", "passed", "runtime_ms"]
        assert all(r[4] == "true" for r in rows)

    def test_invalid_sector_exit_2(self, capsys):
        code, _, err = run(capsys, ["verify-states", "--s", "1/2", "--m", "0", "--j", "0"])
        assert code == 2
        assert "error:" in err

    def test_forced_failure_exit_1(self, capsys):
        code, out, _ = run(capsys, ["verify-states", "--s", "0", "--m", "0", "--j", "0",
                                    "--nmax", "2", "--npoints", "800", "--tol", "1e-30"])
        assert code == 1
        assert "FAIL" in out


class TestOracle:
    def test_sector_table(self, capsys, tmp_path):
        out_path = tmp_path / "oracle.json"
        code, _, _ = run(capsys, ["oracle", "--s", "0", "--m", "0", "--j", "0", "--nmax", "3",
                                  "--rmax", "60", "--npoints", "6000", "--format", "json",
                                  "--out", str(out_path)])
        assert code == 0
        doc = json.loads(out_path.read_text())
        reports = doc["reports"]
        assert [r["inputs"]["n"] for r in reports] == ["1", "2", "3"]
        assert all(r["check_name"] == "spectrum_level" and r["passed"] for r in reports)
        assert reports[0]["details"]["analytic_energy"] == -0.5
        assert abs(reports[0]["details"]["oracle_energy"] + 0.5) <= 1e-4 * 0.5
        assert all(r["residual"] <= r["tolerance"] for r in reports)

    def test_bigJ_mode(self, capsys):
        code, out, _ = run(capsys, ["oracle", "--bigJ", "1.5", "--nmax", "2", "--rmax", "150",
                                    "--npoints", "6000"])
        assert code == 0
        header, rows = parse_csv(out)
        assert [float(r[1]) for r in rows] == [2.5, 3.5]
        assert all(r[5] == "true" for r in rows)

    def test_tolerance_failure_exit_1(self, capsys):
        code, out, _ = run(capsys, ["oracle", "--s", "0", "--m", "0", "--j", "0", "--nmax", "1",
                                    "--rmax", "60", "--npoints", "120", "--tol", "1e-9"])
        assert code == 1
        _, rows = parse_csv(out)
        assert rows[0][5] == "false"

    def test_requires_sector_or_bigJ(self, capsys):
        code, _, err = run(capsys, ["oracle", "--nmax", "1"])
        assert code == 2
        assert "--bigJ" in err

    def test_convergence_failure_exit_1(self, capsys, monkeypatch):
        import micz_su11.cli as cli
        from micz_su11.numeric_verify import ConvergenceFailure

        def boom(*args, **kwargs):
            raise ConvergenceFailure("bisection stalled")

        monkeypatch.setattr(cli, "eig_oracle", boom)
        code, _, err = run(capsys, ["oracle", "--bigJ", "0", "--nmax", "1", "--npoints", "100"])
        assert code == 1
        assert "stalled" in err

    def test_too_coarse_grid_is_a_usage_error(self, capsys):
        code, _, err = run(capsys, ["oracle", "--bigJ", "0", "--nmax", "1",
                                    "--rmax", "500", "--npoints", "16"])
        assert code == 2
        assert "wavelength" in err


class TestParser:
    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["spectrum", "--s", "0", "--m", "0", "--j", "0", "--bogus", "1"])
        assert exc.value.code == 2
