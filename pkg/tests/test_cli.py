import json

import numpy as np
import pytest

from envlp import write_polygon_csv, write_signal_csv
from envlp.cli import SweepSpec, dumps, format_float, main

from conftest import star_points


@pytest.fixture()
def cos_csv(tmp_path):
    t = np.arange(1024) / 1024
    path = tmp_path / "cos.csv"
    write_signal_csv(path, np.cos(2 * np.pi * t))
    return str(path)


@pytest.fixture()
def const_csv(tmp_path):
    path = tmp_path / "const.csv"
    write_signal_csv(path, np.full(64, 2.0))
    return str(path)


@pytest.fixture()
def star_csv(tmp_path):
    path = tmp_path / "star.csv"
    write_polygon_csv(tmp_path / "star_poly.csv", star_points())
    rc = main(["ingest", str(tmp_path / "star_poly.csv"), "--samples", "1024", "--out", str(path)])
    assert rc == 0
    return str(path)


class TestFormatting:
    def test_float_has_17_significant_digits(self):
        assert format_float(1 / 3) == "0.33333333333333331"

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            format_float(float("nan"))

    def test_dumps_deterministic_structure(self):
        payload = {"a": 1, "b": [1.5, True, None], "c": {"d": "x"}}
        assert dumps(payload) == dumps(payload)
        assert json.loads(dumps(payload)) == payload


class TestApproximate:
    def test_constant_signal_certified(self, const_csv, capsys):
        rc = main(["approximate", const_csv, "--L", "1", "--n", "64"])
        out = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert out["certified"] is True
        assert out["gap_bound"] <= 1e-8
        assert out["solver"]["converged"] is True

    def test_cosine_with_user_slope(self, cos_csv, capsys):
        rc = main(
            ["approximate", cos_csv, "--L", "1", "--n", "64", "--lipschitz", "6.2832"]
        )
        out = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert out["cost_appopt"] == pytest.approx(1 / 3, abs=2e-3)
        assert out["c"] == 6.2832

    def test_missing_file(self, tmp_path, capsys):
        rc = main(["approximate", str(tmp_path / "nope.csv"), "--L", "1", "--n", "8"])
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_output_file_byte_identical(self, cos_csv, tmp_path):
        out1 = tmp_path / "r1.json"
        out2 = tmp_path / "r2.json"
        for out in (out1, out2):
            rc = main(["approximate", cos_csv, "--L", "2", "--n", "32", "--out", str(out)])
            assert rc == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestIngest:
    def test_square_signal_range(self, tmp_path, capsys):
        poly = tmp_path / "square.csv"
        write_polygon_csv(poly, [(0, 0), (1, 0), (1, 1), (0, 1)])
        out = tmp_path / "square_signal.csv"
        rc = main(["ingest", str(poly), "--samples", "256", "--out", str(out)])
        assert rc == 0
        values = [float(v) for v in out.read_text().split()]
        assert len(values) == 256
        assert min(values) == pytest.approx(0.5, abs=1e-9)
        assert max(values) == pytest.approx(np.sqrt(2) / 2, abs=1e-9)
        sidecar = json.loads((tmp_path / "square_signal.json").read_text())
        assert sidecar["centroid"] == pytest.approx([0.5, 0.5])
        assert sidecar["star_shaped"] is True

    def test_triangle_has_three_peaks(self, tmp_path):
        poly = tmp_path / "tri.csv"
        write_polygon_csv(poly, [(0, 0), (1, 0), (0, 1)])
        out = tmp_path / "tri_signal.csv"
        assert main(["ingest", str(poly), "--samples", "256", "--out", str(out)]) == 0
        r = np.array([float(v) for v in out.read_text().split()])
        peaks = sum(
            1 for i in range(256) if r[i] > r[i - 1] and r[i] > r[(i + 1) % 256]
        )
        assert peaks == 3

    def test_two_point_polygon(self, tmp_path, capsys):
        poly = tmp_path / "bad.csv"
        poly.write_text("0,0\n1,1\n")
        assert main(["ingest", str(poly), "--samples", "256"]) == 1

    def test_stdout_mode_emits_samples(self, tmp_path, capsys):
        poly = tmp_path / "square.csv"
        write_polygon_csv(poly, [(0, 0), (1, 0), (1, 1), (0, 1)])
        assert main(["ingest", str(poly), "--samples", "64"]) == 0
        captured = capsys.readouterr()
        assert len(captured.out.split()) == 64
        assert "star_shaped" in captured.err


class TestSweep:
    def test_cosine_chain_monotone(self, cos_csv, capsys):
        rc = main(["sweep", cos_csv, "--L", "1", "--n", "4,8,16,32,64"])
        rows = json.loads(capsys.readouterr().out)
        assert rc == 0
        costs = [row["cost_appopt"] for row in rows]
        assert all(b >= a - 1e-8 for a, b in zip(costs, costs[1:]))
        assert [row["n"] for row in rows] == [4, 8, 16, 32, 64]

    def test_star_costs_non_increasing_in_budget(self, star_csv, capsys):
        rc = main(["sweep", star_csv, "--L", "1,2,3,4,5", "--n", "64"])
        rows = json.loads(capsys.readouterr().out)
        assert rc == 0
        costs = [row["cost_appopt"] for row in rows]
        assert all(b <= a + 1e-9 for a, b in zip(costs, costs[1:]))

    def test_empty_n_list(self, cos_csv, capsys):
        assert main(["sweep", cos_csv, "--L", "1", "--n", ""]) == 1

    def test_pair_below_parameter_count(self, cos_csv):
        assert main(["sweep", cos_csv, "--L", "5", "--n", "8"]) == 1

    def test_failing_row_flagged_and_continues(self, cos_csv, capsys):
        rc = main(["sweep", cos_csv, "--L", "0", "--n", "8,2000000"])
        rows = json.loads(capsys.readouterr().out)
        assert rc == 3
        assert "cost_appopt" in rows[0]
        assert "error" in rows[1]

    def test_csv_table_format(self, cos_csv, capsys):
        rc = main(["sweep", cos_csv, "--L", "1", "--n", "8,16", "--format", "csv"])
        lines = capsys.readouterr().out.strip().splitlines()
        assert rc == 0
        assert lines[0] == "L,n,cost_appopt,cost_subopt,gap_bound,certified,min_margin"
        assert len(lines) == 3
        assert lines[1].startswith("1,8,")

    def test_byte_identical_output(self, star_csv, tmp_path):
        out1 = tmp_path / "s1.json"
        out2 = tmp_path / "s2.json"
        for out in (out1, out2):
            rc = main(["sweep", star_csv, "--L", "1,2", "--n", "16,32", "--out", str(out)])
            assert rc == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SweepSpec(L_values=(1,), n_values=())
        with pytest.raises(ValueError):
            SweepSpec(L_values=(2,), n_values=(4,))
        with pytest.raises(ValueError):
            SweepSpec(L_values=(1,), n_values=(8,), c_prime_mode="bogus")


class TestCertify:
    def _result_file(self, cos_csv, tmp_path):
        path = tmp_path / "result.json"
        rc = main(
            ["approximate", cos_csv, "--L", "1", "--n", "64", "--out", str(path)]
        )
        assert rc == 0
        return path

    def test_denser_grid_still_certified(self, cos_csv, tmp_path, capsys):
        result = self._result_file(cos_csv, tmp_path)
        rc = main(["certify", str(result), cos_csv, "--grid", "32768"])
        report = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert report["certified"] is True

    def test_lowered_dc_fails(self, cos_csv, tmp_path, capsys):
        result = self._result_file(cos_csv, tmp_path)
        payload = json.loads(result.read_text())
        payload["subopt"]["b0"] -= 1.0
        result.write_text(json.dumps(payload))
        rc = main(["certify", str(result), cos_csv])
        report = json.loads(capsys.readouterr().out)
        assert rc == 3
        assert report["min_margin"] < 0

    def test_mismatched_budget(self, cos_csv, tmp_path, capsys):
        result = self._result_file(cos_csv, tmp_path)
        payload = json.loads(result.read_text())
        payload["subopt"]["b_re"] = [0.1, 0.2]
        result.write_text(json.dumps(payload))
        assert main(["certify", str(result), cos_csv]) == 1


class TestEnvironment:
    def test_max_iter_override_invalid(self, const_csv, monkeypatch, capsys):
        monkeypatch.setenv("ENVLP_MAX_ITER", "zero")
        assert main(["approximate", const_csv, "--L", "0", "--n", "8"]) == 1

    def test_max_iter_override_used(self, const_csv, monkeypatch, capsys):
        monkeypatch.setenv("ENVLP_MAX_ITER", "50000")
        assert main(["approximate", const_csv, "--L", "0", "--n", "8"]) == 0
