import json
import shutil
import subprocess
import sys

import pytest

from jchm import cli
from jchm.cli import CSV_HEADER, main
from jchm.validation import CheckResult


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_point_insulator(capsys):
    code, out, err = run_cli(capsys, "point", "--l", "2", "--x", "-4", "--y", "-0.3")
    assert code == 0
    assert "phase = MI:2" in out
    assert "psi = 0\n" in out
    assert "converged = true" in out
    assert "n_max = 80" in out  # finest probe level, twice the base truncation
    l_expect = float(next(ln for ln in out.splitlines()
                          if ln.startswith("L_expect")).split("=")[1])
    assert l_expect == pytest.approx(2.0, abs=1e-9)


def test_point_superfluid(capsys):
    code, out, _ = run_cli(capsys, "point", "--l", "1", "--x", "-0.5", "--y", "-1.2")
    assert code == 0
    assert "phase = SF" in out
    psi = float(next(ln for ln in out.splitlines() if ln.startswith("psi")).split("=")[1])
    assert psi > 1e-3


def test_point_missing_coordinate(capsys):
    code, _, err = run_cli(capsys, "point", "--l", "1", "--x", "-2")
    assert code == 1
    assert "invalid parameter" in err
    assert "x/y" in err


def test_point_bad_truncation_names_field(capsys):
    code, _, err = run_cli(capsys, "point", "--l", "1", "--x", "-2", "--y", "-1.2",
                           "--n-max", "1")
    assert code == 1
    assert "n_max" in err


def test_point_bad_l_names_field(capsys):
    code, _, err = run_cli(capsys, "point", "--l", "7", "--x", "-2", "--y", "-1.2")
    assert code == 1
    assert "l:" in err


def test_point_invalid_omega(capsys):
    # y >= l mu leaves no positive cavity frequency
    code, _, err = run_cli(capsys, "point", "--l", "1", "--x", "-2", "--y", "1.5")
    assert code == 1
    assert "omega" in err


def test_point_indeterminate_exit_code(capsys):
    # shallow slope puts the occupation optimum between the probe levels
    code, out, _ = run_cli(capsys, "point", "--l", "1", "--x", "-6", "--y", "-0.0646")
    assert code == 2
    assert "phase = INDET" in out
    assert "probe_pinned = false" in out
    assert "note = " in out


def test_diagram_csv_file(tmp_path, capsys):
    out_file = tmp_path / "grid.csv"
    args = ["diagram", "--l", "1", "--x-range=-4:-3:5",
            "--y-range=-1.8:-1.4:5", "--out", str(out_file)]
    code, _, err = run_cli(capsys, *args)
    assert code == 0
    text = out_file.read_text()
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 26
    assert all(ln.split(",")[5] == "MI:0" for ln in lines[1:])
    assert "cells = 25" in err

    # rerun lands byte-identical
    first = out_file.read_bytes()
    code, _, _ = run_cli(capsys, *args)
    assert code == 0
    assert out_file.read_bytes() == first


def test_diagram_stdout_default(capsys):
    code, out, _ = run_cli(capsys, "diagram", "--l", "1",
                           "--x-range=-4:-3.5:2", "--y-range=-1.8:-1.6:2")
    assert code == 0
    assert out.startswith(CSV_HEADER + "\n")
    assert len(out.splitlines()) == 5


def test_diagram_json(tmp_path, capsys):
    out_file = tmp_path / "grid.json"
    code, _, _ = run_cli(capsys, "diagram", "--l", "1", "--format", "json",
                         "--x-range=-4:-3:3", "--y-range=-1.8:-1.4:3",
                         "--out", str(out_file))
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["spec"]["command"] == "diagram"
    assert data["spec"]["l"] == 1
    assert data["spec"]["x_range"] == [-4.0, -3.0, 3]
    cols = data["columns"]
    assert set(cols) == {"x_log10_kappa", "y_lmu_minus_omega", "psi", "energy",
                         "L_expect", "phase", "n_max", "converged"}
    assert cols["phase"] == ["MI:0"] * 9
    assert all(isinstance(v, float) for v in cols["energy"])


def test_diagram_invalid_cells_partial_exit(tmp_path, capsys):
    out_file = tmp_path / "grid.json"
    code, _, err = run_cli(capsys, "diagram", "--l", "1", "--format", "json",
                           "--x-range=-3:-2:2", "--y-range", "1.1:1.3:2",
                           "--out", str(out_file))
    assert code == 3
    assert "INVALID=4" in err
    data = json.loads(out_file.read_text())
    assert data["columns"]["phase"] == ["INVALID"] * 4
    # non-finite numbers become JSON null
    assert data["columns"]["energy"] == [None] * 4


def test_diagram_high_order_tokens(tmp_path, capsys):
    out_file = tmp_path / "grid.csv"
    code, _, _ = run_cli(capsys, "diagram", "--l", "3",
                         "--x-range=-4:-1:2", "--y-range=-1.5:0:2",
                         "--out", str(out_file))
    assert code == 0
    tokens = {ln.split(",")[5] for ln in out_file.read_text().splitlines()[1:]}
    assert tokens <= {"SF", "FORBIDDEN"}


def test_diagram_bad_range_syntax(capsys):
    code, _, err = run_cli(capsys, "diagram", "--l", "1", "--x-range=-4:-3")
    assert code == 1
    assert "x-range" in err


def test_scan_csv(capsys):
    code, out, _ = run_cli(capsys, "scan", "--l", "1", "--y", "-1.2",
                           "--x-range=-4:-1:4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x_log10_kappa,y_lmu_minus_omega,energy,psi"
    assert len(lines) == 5
    for ln in lines[1:]:
        e = float(ln.split(",")[2])
        assert abs(e) < 1e-8  # whole cut sits in the empty-lattice insulator


def test_boundary_lobe(capsys):
    code, out, _ = run_cli(capsys, "boundary", "--l", "2", "--axis", "y",
                           "--fixed", "-4", "--bracket=-1:-0.3",
                           "--between", "MI:0,MI:2")
    assert code == 0
    assert "pair = MI:0 MI:2" in out
    value = float(next(ln for ln in out.splitlines()
                       if ln.startswith("boundary")).split("=")[1])
    assert value == pytest.approx(-0.6180339887498949, abs=2e-3)


def test_boundary_pair_mismatch(capsys):
    code, _, err = run_cli(capsys, "boundary", "--l", "2", "--axis", "y",
                           "--fixed", "-4", "--bracket=-1:-0.3",
                           "--between", "MI:0,SF")
    assert code == 1
    assert "expected" in err


def test_analytic_two_photon(capsys):
    code, out, _ = run_cli(capsys, "analytic", "--l", "2")
    assert code == 0
    assert "2.6180339887" in out  # lobe-edge cavity frequency
    assert "0.078520" in out  # level-crossing y coordinate
    assert "omega-2" in out
    assert "strong_coupling" not in out


def test_analytic_single_photon_curves(capsys):
    code, out, _ = run_cli(capsys, "analytic", "--l", "1",
                           "--x-range=-3:-1:3")
    assert code == 0
    assert "omega-1" in out
    assert "strong_coupling" in out
    lines = out.splitlines()
    header = lines[0].split(",")
    assert header[0] == "quantity"
    # 5 curve branches, each with kappa -> 0 plus 3 sampled kappa
    sc_rows = [ln for ln in lines[1:] if ln.startswith("strong_coupling")]
    assert len(sc_rows) == 5 * 4


def test_analytic_high_order_unbounded(capsys):
    code, out, _ = run_cli(capsys, "analytic", "--l", "4")
    assert code == 0
    assert "unbounded" in out


def test_analytic_json(tmp_path, capsys):
    out_file = tmp_path / "analytic.json"
    code, _, _ = run_cli(capsys, "analytic", "--l", "2", "--format", "json",
                         "--out", str(out_file))
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["spec"]["command"] == "analytic"
    assert "value" in data["columns"]


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"l": 2, "x": -4.0, "y": -1.3, "n_max": 9}))
    code, out, _ = run_cli(capsys, "point", "--config", str(cfg))
    assert code == 0
    assert "phase = MI:0" in out
    assert "n_max = 18" in out  # probe doubles the configured truncation


def test_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"l": 2, "x": -4.0, "y": -1.3, "n_max": 9}))
    code, out, _ = run_cli(capsys, "point", "--config", str(cfg), "--n-max", "12")
    assert code == 0
    assert "n_max = 24" in out


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"l": 1, "nmax": 10}))
    code, _, err = run_cli(capsys, "point", "--config", str(cfg),
                           "--x", "-2", "--y", "-1.2")
    assert code == 1
    assert "unknown key 'nmax'" in err


def test_config_not_an_object(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text("[1, 2]")
    code, _, err = run_cli(capsys, "point", "--config", str(cfg),
                           "--x", "-2", "--y", "-1.2")
    assert code == 1
    assert "JSON object" in err


def test_config_missing_file(capsys):
    code, _, err = run_cli(capsys, "point", "--config", "/nonexistent/run.json",
                           "--x", "-2", "--y", "-1.2")
    assert code == 1
    assert "cannot read" in err


def test_jobs_env_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("JCHM_JOBS", "2")
    out_file = tmp_path / "grid.csv"
    code, _, _ = run_cli(capsys, "diagram", "--l", "1",
                         "--x-range=-4:-3.5:2", "--y-range=-1.8:-1.6:2",
                         "--out", str(out_file))
    assert code == 0
    assert len(out_file.read_text().splitlines()) == 5


def test_jobs_env_invalid(capsys, monkeypatch):
    monkeypatch.setenv("JCHM_JOBS", "abc")
    code, _, err = run_cli(capsys, "diagram", "--l", "1",
                           "--x-range=-4:-3.5:2", "--y-range=-1.8:-1.6:2")
    assert code == 1
    assert "JCHM_JOBS" in err


def test_jobs_flag_beats_env(capsys, monkeypatch):
    # the flag wins, so the bad environment value is never parsed
    monkeypatch.setenv("JCHM_JOBS", "abc")
    code, _, _ = run_cli(capsys, "diagram", "--l", "1", "--jobs", "1",
                         "--x-range=-4:-3.5:2", "--y-range=-1.8:-1.6:2")
    assert code == 0


def _fake_results(all_pass):
    return [
        CheckResult(name="alpha", passed=True, measured=1.0, expected=1.0,
                    tolerance=0.1, seconds=0.01),
        CheckResult(name="beta", passed=all_pass, measured=2.0, expected=3.0,
                    tolerance=0.1, seconds=0.02, detail="off by one"),
    ]


def test_validate_reports_pass(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr(cli, "run_all",
                        lambda quick, settings: _fake_results(True))
    report = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "validate", "--quick", "--out", str(report))
    assert code == 0
    assert "[PASS] alpha" in out
    data = json.loads(report.read_text())
    assert data["passed"] is True
    assert [c["name"] for c in data["checks"]] == ["alpha", "beta"]


def test_validate_reports_failure(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_all",
                        lambda quick, settings: _fake_results(False))
    code, out, err = run_cli(capsys, "validate")
    assert code == 1
    assert "[FAIL] beta" in out
    assert "off by one" in out
    assert "failed: beta" in err


def test_module_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "jchm", "analytic", "--l", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "unbounded" in proc.stdout


@pytest.mark.skipif(shutil.which("jchm") is None, reason="console script not on PATH")
def test_console_script():
    proc = subprocess.run(["jchm", "analytic", "--l", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "unbounded" in proc.stdout
