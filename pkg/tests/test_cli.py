import csv
import subprocess
import sys

import pytest

from fulldisp.harness.cli import main
from fulldisp.harness.snapshot import read_snapshot


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


SIM = """[run]
model = {model}
[grid]
n = 32
nz = 12
[params]
mu = 0.3
eps = 0.1
[initial]
family = {family}
a = 0.5
{extra}
[stepper]
dt = 0.01
t_end = {t_end}
record_every = 5
[output]
prefix = run
"""


def test_version_and_usage(capsys):
    assert main(["--version"]) == 0
    assert main([]) == 2
    assert main(["no-such-command"]) == 2


def test_simulate_and_resume(tmp_path, capsys):
    cfg = write(tmp_path, "a.ini", SIM.format(model="FDGN1", family="cosine", extra="", t_end=0.2))
    out = tmp_path / "out"
    assert main(["simulate", str(cfg), "--out", str(out), "--emit-gnuplot"]) == 0
    assert "simulate: PASS" in capsys.readouterr().out
    with (out / "run_diagnostics.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["t", "mass", "momentum", "energy"]
    assert float(rows[-1]["t"]) == pytest.approx(0.2)
    assert (out / "run_diagnostics.gp").exists()
    snap = read_snapshot(out / "run_final.csv")
    assert snap.t == pytest.approx(0.2)

    cfg2 = write(tmp_path, "b.ini", SIM.format(model="FDGN1", family="snapshot",
                                              extra=f"path = {out / 'run_final.csv'}", t_end=0.3))
    out2 = tmp_path / "out2"
    assert main(["simulate", "--config", str(cfg2), "--out", str(out2)]) == 0
    with (out2 / "run_diagnostics.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert float(rows[0]["t"]) == pytest.approx(0.2) and float(rows[-1]["t"]) == pytest.approx(0.3)

    bad = write(tmp_path, "c.ini", SIM.format(model="WB", family="snapshot",
                                             extra=f"path = {out / 'run_final.csv'}", t_end=0.3))
    assert main(["simulate", str(bad), "--out", str(tmp_path / "o3")]) == 2
    assert "cannot resume" in capsys.readouterr().err


def test_velocity_form_simulation(tmp_path):
    cfg = write(tmp_path, "v.ini", SIM.format(model="FDGN-DIT", family="gaussian-periodic", extra="b = 0.3", t_end=0.1))
    assert main(["simulate", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert read_snapshot(tmp_path / "o" / "run_final.csv").second_name == "w"


def test_config_errors_exit_2_with_lines(tmp_path, capsys):
    cfg = write(tmp_path, "bad.ini", "[grid]\nn = 7\n[params]\neps = x\n")
    assert main(["simulate", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert f"{cfg}:2:" in err and f"{cfg}:4:" in err
    assert main(["simulate", str(cfg), "--config", str(tmp_path / "other.ini")]) == 2
    assert main(["simulate", "--jobs", "0"]) == 2


def test_multiplier_check_reports_failing_table(tmp_path, capsys):
    # F3 <= 1/(1 + x/3) does not hold, so this command exits 1 and names the table
    assert main(["multiplier-check", "--out", str(tmp_path)]) == 1
    cap = capsys.readouterr()
    assert "FAIL" in cap.out and "PASS" in cap.out
    assert "multiplier_f3_bounds.csv" in cap.err
    with (tmp_path / "multiplier_symbols.csv").open() as fh:
        header = next(csv.reader(fh))
    assert header[:6] == ["xi", "F1", "F2", "F3", "sqrtF3", "F0(z=-1)"]
    assert (tmp_path / "multiplier-check_summary.txt").exists()


def test_dispersion_check_passes(tmp_path):
    cfg = write(tmp_path, "d.ini", "[grid]\nn = 32\nnz = 12\n[dispersion]\nmodels = FDGN1, WB, GN2-classical\n")
    assert main(["dispersion-check", str(cfg), "--out", str(tmp_path)]) == 0


def test_log_env_and_module_entry(tmp_path):
    env = {"FULLDISP_LOG": "loud", "PATH": "/usr/bin:/bin"}
    r = subprocess.run([sys.executable, "-m", "fulldisp", "--version"], capture_output=True, text=True, env=env)
    assert r.returncode == 0 and "fulldisp" in r.stdout
    assert "FULLDISP_LOG" in r.stderr
