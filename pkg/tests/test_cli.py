import csv
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from ltrcweibull.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def read_bytes(path):
    return Path(path).read_bytes()


class TestTopLevel:
    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output

    def test_help_lists_subcommands(self, runner):
        result = runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        for name in ("fit", "bootstrap", "bayes", "lrt", "profile", "simulate"):
            assert name in result.output


class TestFit:
    def test_default_dataset_report(self, runner):
        result = runner.invoke(main, ["fit"])
        assert result.exit_code == 0
        assert "common-shape fit (n=100, m1=14, m2=33)" in result.output
        assert "alpha    2.79544" in result.output
        assert "lambda1  6.76081" in result.output
        assert "lambda2  15.9362" in result.output
        assert "converged: yes" in result.output
        assert "manifest: {" in result.output

    def test_separate_flag_adds_per_cause_fit(self, runner):
        result = runner.invoke(main, ["fit", "--separate"])
        assert result.exit_code == 0
        assert "alpha1   2.81704" in result.output
        assert "alpha2   2.78634" in result.output

    def test_out_writes_json_and_manifest(self, runner, tmp_path):
        out = tmp_path / "fit.json"
        result = runner.invoke(main, ["fit", "--out", str(out)])
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["schema_version"] == 1
        assert payload["common"]["alpha"] == pytest.approx(2.795441, abs=1e-5)
        manifest = json.loads((tmp_path / "fit.json.manifest.json").read_text())
        assert manifest["subcommand"] == "fit"
        assert manifest["settings"]["scale"] == 100.0
        assert "manifest: {" not in result.output

    def test_missing_input_exits_two(self, runner):
        result = runner.invoke(main, ["fit", "--input", "no-such-file.csv"])
        assert result.exit_code == 2

    def test_malformed_input_exits_one(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("sn,install_year,exit_year,nu,delta\n1,abc,1996,0,2\n")
        result = runner.invoke(main, ["fit", "--input", str(bad)])
        assert result.exit_code == 1
        assert "Error" in result.output


class TestBootstrap:
    def test_table_and_determinism(self, runner, tmp_path):
        out = tmp_path / "boot.csv"
        args = ["bootstrap", "--B", "16", "--seed", "4", "--out", str(out)]
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        assert "bootstrap intervals (B=16, seed=4" in result.output
        with out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 12  # 3 parameters x 2 levels x 2 methods
        assert {r["method"] for r in rows} == {"bc_bootstrap", "percentile_bootstrap"}
        assert {r["parameter"] for r in rows} == {"alpha", "lambda1", "lambda2"}
        first = read_bytes(out)
        assert runner.invoke(main, args).exit_code == 0
        assert read_bytes(out) == first

    def test_floor_at_zero_clamps_lower_bounds(self, runner, tmp_path):
        out = tmp_path / "boot.csv"
        result = runner.invoke(
            main,
            ["bootstrap", "--B", "16", "--seed", "4", "--floor-at-zero",
             "--out", str(out)],
        )
        assert result.exit_code == 0
        with out.open() as fh:
            assert all(float(r["lower"]) >= 0.0 for r in csv.DictReader(fh))

    def test_separate_bootstrap_has_four_parameters(self, runner, tmp_path):
        out = tmp_path / "boot.csv"
        result = runner.invoke(
            main,
            ["bootstrap", "--B", "12", "--separate", "--level", "0.9",
             "--out", str(out)],
        )
        assert result.exit_code == 0
        with out.open() as fh:
            params = {r["parameter"] for r in csv.DictReader(fh)}
        assert params == {"alpha1", "lambda1", "alpha2", "lambda2"}


class TestBayes:
    def test_draws_and_intervals(self, runner, tmp_path):
        draws_out = tmp_path / "draws.csv"
        int_out = tmp_path / "intervals.csv"
        args = ["bayes", "--N", "200", "--seed", "3", "--out", str(draws_out),
                "--intervals-out", str(int_out)]
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        assert "posterior sample (N=200, seed=3)" in result.output
        with draws_out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 200
        assert set(rows[0]) == {"alpha", "lambda1", "lambda2"}
        assert all(float(v) > 0 for v in rows[0].values())
        with int_out.open() as fh:
            int_rows = list(csv.DictReader(fh))
        assert len(int_rows) == 12
        assert {r["method"] for r in int_rows} == {"symmetric_cri", "hpd_cri"}
        first = read_bytes(draws_out)
        assert runner.invoke(main, args).exit_code == 0
        assert read_bytes(draws_out) == first

    def test_separate_draw_columns(self, runner, tmp_path):
        out = tmp_path / "draws.csv"
        result = runner.invoke(
            main, ["bayes", "--N", "50", "--separate", "--out", str(out)]
        )
        assert result.exit_code == 0
        with out.open() as fh:
            header = fh.readline().strip().split(",")
        assert header == ["alpha1", "lambda1", "alpha2", "lambda2"]


class TestLrt:
    def test_report_and_json(self, runner, tmp_path):
        out = tmp_path / "lrt.json"
        result = runner.invoke(main, ["lrt", "--out", str(out)])
        assert result.exit_code == 0
        assert "fail to reject equal shapes" in result.output
        payload = json.loads(out.read_text())
        assert payload["statistic"] == pytest.approx(0.0017995, abs=1e-6)
        assert payload["critical_value_95"] == 3.841
        assert payload["reject"] is False


class TestProfile:
    def test_grid_export(self, runner, tmp_path):
        out = tmp_path / "profile.csv"
        result = runner.invoke(main, ["profile", "--points", "32", "--out", str(out)])
        assert result.exit_code == 0
        assert "argmax near alpha=" in result.output
        assert "d(alpha) nonnegative on grid: yes" in result.output
        with out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 32
        assert set(rows[0]) == {"alpha", "p_alpha", "d_alpha", "d_tilde_alpha"}


class TestSimulate:
    @pytest.mark.filterwarnings("ignore::ltrcweibull.errors.FallbackSamplerWarning")
    def test_tiny_study(self, runner, tmp_path):
        out = tmp_path / "sim.csv"
        result = runner.invoke(
            main,
            ["simulate", "--preset", "table1", "--replications", "2",
             "--B", "12", "--N", "100", "--seed", "3", "--threads", "1",
             "--out", str(out)],
        )
        assert result.exit_code == 0
        assert "table1: n=100, truncation 10%" in result.output
        assert "table1: n=100, truncation 30%" in result.output
        with out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert {r["metric"] for r in rows} >= {"bias", "rmse", "cp", "al"}
        manifest = json.loads((tmp_path / "sim.csv.manifest.json").read_text())
        assert manifest["settings"]["preset"] == "table1"

    def test_unknown_preset_rejected(self, runner):
        result = runner.invoke(main, ["simulate", "--preset", "table99"])
        assert result.exit_code == 2
