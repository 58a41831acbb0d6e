"""End-to-end command-line runs: files produced, exit codes, determinism."""

import subprocess
import sys

import pytest

import growthlab.production as production
from growthlab import CSV_HEADER, MarginalProducts
from growthlab.cli import main

BALANCED = """\
[production]
family = cobb_douglas
alpha = 0.3333333333333333

[bias]
kind = harrod
rate = 0.02

[run]
t_end = 300
dt = 0.1
"""

NO_FIGURES = "\n[output]\nfigures = false\n"


def write_cfg(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_simulate_writes_trajectory_report_and_figure(tmp_path):
    cfg = write_cfg(tmp_path, BALANCED.replace("t_end = 300", "t_end = 50"))
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "trajectory.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 502
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert report.startswith("# resolved configuration")
    assert "[simulation]" in report
    assert "max_abs_accounting_residual = " in report
    assert (out / "trajectory.png").is_file()


def test_figures_can_be_disabled(tmp_path):
    cfg = write_cfg(tmp_path, BALANCED + NO_FIGURES)
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    assert not (out / "trajectory.png").exists()


def test_verdict_reports_balanced_growth(tmp_path):
    cfg = write_cfg(tmp_path, BALANCED)
    out = tmp_path / "out"
    assert main(["verdict", "--config", cfg, "--out", str(out), "--seed", "7"]) == 0
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert "verdict = BGP" in report
    assert "consistent = true" in report
    assert "rho_effective = 0.02" in report
    assert "labor_augmenting_deviation = " in report
    assert (out / "trajectory.csv").is_file()
    assert (out / "verdict.png").is_file()


def test_verdict_outputs_are_byte_identical(tmp_path):
    cfg = write_cfg(tmp_path, BALANCED + NO_FIGURES)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verdict", "--config", cfg, "--out", str(a)]) == 0
    assert main(["verdict", "--config", cfg, "--out", str(b)]) == 0
    for name in ("trajectory.csv", "report.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_broken_marginal_products_exit_code_two(tmp_path, monkeypatch, capsys):
    """A technology whose reported partials disagree with its output level
    slips through every internal identity (they share the same wrong f_K)
    but lands on a growth rate the classification forbids: exit code 2."""
    orig = production.ProductionFunction.marginal_products

    def crooked(self, K, L, t):
        mp = orig(self, K, L, t)
        return MarginalProducts(1.3 * mp.f_K, mp.f_L, mp.f_t)

    monkeypatch.setattr(production.ProductionFunction, "marginal_products", crooked)
    cfg = write_cfg(tmp_path, BALANCED + NO_FIGURES)
    out = tmp_path / "out"
    assert main(["verdict", "--config", cfg, "--out", str(out)]) == 2
    assert "contradicts" in capsys.readouterr().err
    # the report is still written so the contradiction can be inspected
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert "consistent = false" in report


def test_classify_matrix_csv_and_report(tmp_path):
    cfg = write_cfg(tmp_path, "[run]\ndt = 0.1\n" + NO_FIGURES)
    out = tmp_path / "out"
    assert main(["classify", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "classify.csv").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 13
    assert lines[0].startswith("family,bias,verdict,g_hat")
    assert sum(1 for ln in lines[1:] if ",NoBGP," in ln) == 4
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert "all_consistent = true" in report


def test_pde_reports_convergence_order(tmp_path):
    cfg = write_cfg(tmp_path, "[pde]\nnL = 64\nnt = 128\n")
    out = tmp_path / "out"
    assert main(["pde", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "upwind.csv").is_file()
    assert (out / "exact.csv").is_file()
    assert (out / "pde.png").is_file()
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert "mean_order = " in report
    mean_order = float(report.split("mean_order = ")[1].splitlines()[0])
    assert 0.8 <= mean_order <= 1.2


def test_timescale_fractions_csv(tmp_path):
    cfg = write_cfg(tmp_path, BALANCED.replace("t_end = 300", "t_end = 200"))
    out = tmp_path / "out"
    assert main(["timescale", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "fractions.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "fraction,time"
    assert len(lines) == 5
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert "half_life = " in report
    assert "analytic_rate = " in report
    assert (out / "timescale.png").is_file()


def test_invalid_config_prints_each_problem(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "[production]\nalpha = 1.5\nwhat = 9\n")
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "line 2: alpha out of range (0,1)" in err
    assert "line 3: unknown key 'what'" in err


def test_missing_config_file(tmp_path, capsys):
    missing = str(tmp_path / "nope.cfg")
    assert main(["verdict", "--config", missing, "--out", str(tmp_path / "o")]) == 1
    assert "cannot read config file" in capsys.readouterr().err


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc_info:
        main(["simulate"])  # --config and --out are required
    assert exc_info.value.code == 1
    with pytest.raises(SystemExit) as exc_info:
        main(["conjure", "--config", "x", "--out", "y"])
    assert exc_info.value.code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "growthlab", "--help"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    for word in ("simulate", "verdict", "classify", "pde", "timescale"):
        assert word in proc.stdout
