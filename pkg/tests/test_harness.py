"""Config parsing, suite harness, CLI, determinism, fault injection."""

import json
import os
import subprocess
import sys

import pytest

from seltrace.config import ConfigError, RunConfig, load_config
from seltrace.suites import SUITE_NAMES, UnknownSuiteError, emit_report, run_suite


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.tol("analytic") == 1e-8
        assert cfg.tol("quadrature") == 1e-6
        assert cfg.tol("fd") == 1e-4
        assert cfg.tol("tf") == 1e-3

    def test_file_parsing(self, tmp_path):
        p = tmp_path / "cfg.txt"
        p.write_text("tol.fd = 5e-4\nnx = 64   # comment\nms_T = 1.0,1.5\n")
        cfg = load_config(str(p))
        assert cfg.tol("fd") == 5e-4
        assert cfg.nx == 64
        assert cfg.ms_T == (1.0, 1.5)

    def test_flag_overrides_file(self, tmp_path):
        p = tmp_path / "cfg.txt"
        p.write_text("nx = 64\n")
        cfg = load_config(str(p), {"nx": "96"})
        assert cfg.nx == 96

    def test_env_var(self, tmp_path, monkeypatch):
        p = tmp_path / "cfg.txt"
        p.write_text("seed = 777\n")
        monkeypatch.setenv("SELTRACE_CONFIG", str(p))
        assert load_config().seed == 777

    def test_bad_key(self, tmp_path):
        p = tmp_path / "cfg.txt"
        p.write_text("bogus = 1\n")
        with pytest.raises(ConfigError):
            load_config(str(p))

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig(tolerances={"fd": -1.0})


class TestHarness:
    def test_unknown_suite(self):
        with pytest.raises(UnknownSuiteError):
            run_suite("unknown-suite")

    def test_suite_names_complete(self):
        assert set(SUITE_NAMES) == {
            "torus-plancherel", "mellin-roundtrip", "charged-core",
            "functional-equations", "hc-bound", "maass-selberg",
            "constant-term-symmetry", "rank-one-plancherel",
            "kernel-relations", "tf-minus1", "geometric-terms", "tate-zeta",
        }

    def test_report_pass_semantics(self):
        rep = run_suite("hc-bound")
        for r in rep.records:
            assert r["pass"] == (r["deviation"] <= r["tolerance"])

    def test_emit_json_roundtrip(self, tmp_path):
        rep = run_suite("hc-bound")
        path = str(tmp_path / "rep.json")
        emit_report(rep, path)
        data = json.loads(open(path).read())
        assert data["suite"] == "hc-bound"
        assert data["passed"] is True
        assert len(data["records"]) == len(rep.records)

    def test_emit_csv_columns(self, tmp_path):
        rep = run_suite("hc-bound")
        path = str(tmp_path / "rep.csv")
        emit_report(rep, path, fmt="csv")
        header = open(path).read().splitlines()[0]
        assert header == "suite,id,inputs,expected,got,deviation,tolerance,pass"

    def test_determinism_byte_identical(self, tmp_path):
        cfg = RunConfig(seed=99)
        p1, p2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        emit_report(run_suite("functional-equations", cfg), p1)
        emit_report(run_suite("functional-equations", cfg), p2)
        assert open(p1, "rb").read() == open(p2, "rb").read()

    def test_fault_injection_fails_suite(self):
        cfg = RunConfig(fault_injection="c_sign")
        rep = run_suite("functional-equations", cfg)
        assert not rep.passed

    def test_empty_corpus_selection_flagged(self):
        from seltrace.suites import run_all

        cfg = RunConfig(corpus=("no-such-function",))
        code, reports, lines = run_all(cfg, names=["torus-plancherel"])
        assert code != 0
        assert any("zero checks" in line for line in lines)


def _run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "seltrace.cli", *args],
        capture_output=True,
        text=True,
        timeout=500,
    )


class TestCLI:
    def test_special_eval(self):
        out = _run_cli("special", "eval", "--fn", "zeta", "--re", "2")
        assert out.returncode == 0
        val = json.loads(out.stdout)
        assert abs(val["re"] - 1.6449340668) < 1e-8

    def test_special_kbessel(self):
        out = _run_cli("special", "eval", "--fn", "kbessel", "--nu", "1.0", "--y", "0.5")
        assert out.returncode == 0
        val = json.loads(out.stdout)
        assert abs(val["value"] - 0.4833960900) < 1e-8
        assert val["underflowed"] is False

    def test_verify_suite_exit_code(self):
        out = _run_cli("verify", "hc-bound")
        assert out.returncode == 0
        assert "PASS" in out.stdout

    def test_verify_unknown_exit_2(self):
        out = _run_cli("verify", "nope")
        assert out.returncode == 2

    def test_verify_bad_config_exit_2(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("bogus = 1\n")
        out = _run_cli("verify", "hc-bound", "--config", str(p))
        assert out.returncode == 2

    def test_auto_maass_selberg(self):
        out = _run_cli("auto", "maass-selberg", "--s1", "0,2", "--s2", "0,3", "--T", "1.0")
        assert out.returncode == 0
        rec = json.loads(out.stdout)
        assert rec["deviation"] < 1e-4
        assert set(rec) == {"inputs", "value", "breakdown", "deviation"}

    def test_auto_eis(self):
        out = _run_cli("auto", "eis", "--s", "3,0", "--z", "0.2,1.3")
        assert out.returncode == 0
        rec = json.loads(out.stdout)
        assert rec["value"][0] != 0.0

    def test_auto_ct(self):
        out = _run_cli("auto", "ct", "--y", "1.7")
        assert out.returncode == 0
        json.loads(out.stdout)

    def test_tf_report_fast(self, tmp_path):
        out = _run_cli(
            "tf", "report", "--h", "gaussian", "--width", "0.5",
            "--skip-truncation-fit", "--out", str(tmp_path / "tf.json"),
        )
        assert out.returncode == 0
        rec = json.loads(open(tmp_path / "tf.json").read())
        assert rec["tf_minus1"]["deviation_geo_spec"] < 1e-3
        assert "M0_term" in rec["tf0_terms"]
        assert "measure_ledger" in rec
