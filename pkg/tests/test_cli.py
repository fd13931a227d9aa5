import json
import math

import pytest

from hardy_sphere.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    RunConfig,
    UsageError,
    execute,
    main,
    margin_battery,
    parse_args,
    render_report,
)
from hardy_sphere.functionals import ExponentConfig


class TestParseArgs:
    def test_verify_lemmas(self):
        cfg = parse_args(["verify-lemmas", "--n", "5", "--samples", "200",
                          "--tol", "1e-5"])
        assert cfg.command == "verify-lemmas"
        assert cfg.n == 5 and cfg.samples == 200 and cfg.tol == 1e-5
        assert cfg.seed == 42  # reproducible default

    def test_sweep(self):
        cfg = parse_args(["sweep", "--ineq", "f1", "--form", "shrp1", "--n", "5",
                          "--p", "2", "--eps-start", "0.2", "--eps-factor", "0.5",
                          "--steps", "8"])
        assert cfg.command == "sweep"
        assert cfg.ineq == "f1" and cfg.form == "shrp1"
        assert cfg.schedule()[0] == pytest.approx(0.2)
        assert len(cfg.schedule()) == 8

    def test_f3_exponent_rejected(self):
        with pytest.raises(UsageError, match="p >= 2"):
            parse_args(["check", "--ineq", "f3", "--n", "4", "--p", "1.5"])

    def test_inadmissible_subcritical_exponent(self):
        with pytest.raises(UsageError, match="1 < p < n-1"):
            parse_args(["check", "--ineq", "f1", "--n", "5", "--p", "4.5"])

    def test_unknown_flag(self):
        with pytest.raises(UsageError):
            parse_args(["check", "--ineq", "f1", "--frobnicate", "1"])

    def test_missing_shrp3_for_fc1(self):
        with pytest.raises(UsageError, match="no sharpness statement"):
            parse_args(["sweep", "--ineq", "fc1", "--form", "shrp3", "--n", "3",
                        "--regime", "crit"])

    def test_family_mismatch(self):
        with pytest.raises(UsageError, match="proven along family"):
            parse_args(["sweep", "--ineq", "f1", "--form", "shrp1", "--n", "5",
                        "--p", "2", "--family", "inv_sin"])

    def test_regime_mismatch(self):
        with pytest.raises(UsageError):
            parse_args(["sweep", "--ineq", "fc2", "--form", "shrp1", "--n", "3"])


class TestExecute:
    def test_verify_lemmas_passes(self):
        code, report = execute(RunConfig("verify-lemmas", n=5, samples=60))
        assert code == EXIT_OK
        assert report["all_passed"]
        ids = {row["identity"] for row in report["identities"]}
        assert "distance_laplacian" in ids and "coordinate_cross" in ids

    def test_counterexample_found(self):
        code, report = execute(RunConfig("counterexample", n=7, p=2.0))
        assert code == EXIT_OK
        assert report["status"] == "found"
        assert report["eps_star"] is not None
        assert report["margin_closed_form"] > 0.0

    def test_sweep_report_shape(self):
        code, report = execute(RunConfig("sweep", n=5, p=2.0, ineq="f3",
                                         form="shrp3"))
        assert code == EXIT_OK
        assert report["verdict"]
        assert len(report["rows"]) == 8
        assert abs(report["extrapolated"] - report["target"]) <= 0.01

    def test_check_expected_violation(self):
        code, report = execute(RunConfig("check", n=7, p=2.0, ineq="inqfls"))
        assert code == EXIT_OK
        assert report["status"] == "violation found"
        assert report["violations"] >= 1

    def test_check_proven_inequality(self):
        code, report = execute(RunConfig("check", n=5, p=2.0, ineq="f1"))
        assert code == EXIT_OK
        assert report["violations"] == 0


class TestMarginBattery:
    def test_pair_counts(self):
        margins, skipped = margin_battery("f1", ExponentConfig.subcritical(5, 2.0))
        assert len(margins) >= 15
        margins_c, _ = margin_battery("fc2", ExponentConfig.critical(3))
        assert len(margins_c) >= 9

    def test_skips_are_reported_not_fatal(self):
        margins, skipped = margin_battery("f3", ExponentConfig.subcritical(5, 2.0))
        assert all("not integrable" in s["reason"] for s in skipped)


class TestRendering:
    def test_sweep_csv_schema(self):
        _, report = execute(RunConfig("sweep", n=5, p=2.0, ineq="f3", form="shrp3"))
        text = render_report(report, "csv")
        lines = text.strip().split("\n")
        assert lines[0] == "eps,ratio_quadrature,ratio_closed_form,rel_gap,target"
        assert len(lines) == 1 + 8 + 1  # header, rows, extrapolated
        last = lines[-1].split(",")
        assert float(last[0]) == 0.0
        assert abs(float(last[1]) - 1.0) < 1e-3

    def test_seventeen_digit_round_trip(self):
        _, report = execute(RunConfig("sweep", n=5, p=2.0, ineq="f3", form="shrp3"))
        text = render_report(report, "csv")
        row = text.strip().split("\n")[1].split(",")
        assert float(row[1]) == report["rows"][0]["ratio_quadrature"]

    def test_json_deterministic(self):
        _, r1 = execute(RunConfig("verify-lemmas", n=3, samples=25))
        _, r2 = execute(RunConfig("verify-lemmas", n=3, samples=25))
        assert render_report(r1, "json") == render_report(r2, "json")

    def test_report_all_requires_json(self):
        with pytest.raises(UsageError):
            parse_args(["report-all", "--format", "csv"])


class TestMain:
    def test_writes_file(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["verify-lemmas", "--n", "3", "--samples", "25",
                     "--out", str(out)])
        assert code == EXIT_OK
        data = json.loads(out.read_text())
        assert data["command"] == "verify-lemmas"

    def test_byte_identical_outputs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--ineq", "f3", "--form", "shrp2", "--n", "5", "--p", "2",
                "--format", "csv"]
        assert main(args + ["--out", str(a)]) == EXIT_OK
        assert main(args + ["--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_usage_error_exit_code(self, capsys):
        code = main(["check", "--ineq", "f3", "--n", "4", "--p", "1.5"])
        assert code == EXIT_NUMERICAL
        assert "p >= 2" in capsys.readouterr().err

    def test_stdout_default(self, capsys):
        code = main(["counterexample", "--n", "4", "--p", "2", "--format", "csv"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("status,")
        assert "undetermined" in out

    def test_thread_cap_env(self, monkeypatch):
        monkeypatch.setenv("HARDY_SPHERE_THREADS", "2")
        code = main(["sweep", "--ineq", "f3", "--form", "shrp1", "--n", "5",
                     "--p", "2", "--out", "/dev/null"])
        assert code == EXIT_OK
        monkeypatch.setenv("HARDY_SPHERE_THREADS", "nope")
        from hardy_sphere._parallel import thread_cap

        with pytest.raises(ValueError):
            thread_cap()
