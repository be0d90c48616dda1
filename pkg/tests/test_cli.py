import json

import pytest

from pdmwell.cli import main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_levels(capsys):
    code, out, _ = run(capsys, "levels", "--n-max", "3", "--a", "2")
    assert code == 0
    assert out.splitlines() == ["n,kappa,E,admissible", "0,0,0,true", "1,0,4,true", "2,0,12,true", "3,0,24,true"]


def test_state_summary_and_grid(capsys):
    code, out, _ = run(capsys, "state", "--n", "2", "--kappa", "1")
    assert code == 0 and out.startswith("n,kappa,a,energy,norm_const,parity,node_count")
    code, out, _ = run(capsys, "state", "--n", "1", "--emit-grid", "--grid-n", "3")
    lines = out.splitlines()
    assert lines[0] == "x,psi,density" and len(lines) == 4 and lines[2] == "0,0,0"
    code, out, _ = run(capsys, "state", "--n", "0", "--emit-momentum", "--grid-n", "5")
    assert code == 0 and out.splitlines()[0] == "xi,re,im,density"


def test_entropy_fisher(capsys):
    code, out, _ = run(capsys, "entropy", "--n", "0", "--a-list", "2,4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,kappa,a,S_x,S_p,sum,bbm_bound,pass" and len(lines) == 3
    code, out, _ = run(capsys, "fisher", "--n", "0", "--a", "2", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert row["F_x"] == pytest.approx(16 / 3) and "quad_error" in row


@pytest.mark.parametrize("table,rows", [("I", 42), ("II", 63), ("III", 84)])
def test_reproduce(capsys, table, rows):
    code, out, err = run(capsys, "reproduce", table)
    assert code == 0
    assert len(out.splitlines()) == rows + 1
    assert "0 fail" in err


def test_reproduce_json(capsys):
    code, out, _ = run(capsys, "reproduce", "II", "--format", "json")
    data = json.loads(out)
    assert data["summary"]["rows_erratum"] == 2 and data["summary"]["rows_pass"] == 19


def test_spectrum_fd(capsys):
    code, out, _ = run(capsys, "spectrum-fd", "--v1", "0.5", "--n-eigen", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "level,E_fd,E_analytic,abs_err,overlap"
    assert [float(l.split(",")[2]) for l in lines[1:]] == [1.0, 3.0, 6.0]
    code, out, _ = run(capsys, "spectrum-fd", "--v1", "0.3", "--grid-n", "1001")
    assert code == 0 and out.splitlines()[1].endswith(",,,")


def test_validate_and_fault(capsys):
    code, out, _ = run(capsys, "validate", "--format", "json")
    assert code == 0 and json.loads(out)["passed"]
    code, out, err = run(capsys, "validate", "--inject-fault", "normalization", "--suite", "normalization")
    assert code == 1 and "normalization" in err


def test_scan_and_determinism(capsys, tmp_path):
    outs = []
    for i in range(2):
        f = tmp_path / f"scan{i}.csv"
        assert run(capsys, "scan", "--a-list", "2,4,6", "--n-max", "1", "--jobs", "3", "--out", str(f))[0] == 0
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r" not in outs[0]
    assert outs[0].splitlines()[0] == b"n,kappa,a,S_x,S_p,F_x,F_p,var_x,var_p"
    assert len(outs[0].splitlines()) == 1 + 3 * 3


@pytest.mark.parametrize("args", [
    ["state"], ["state", "--n", "1", "--kappa", "2"], ["levels", "--a", "-1"], ["bogus"],
    ["spectrum-fd", "--grid-n", "100"], ["scan", "--a-list", "1,-2"], ["scan", "--a-list", "x"],
    ["levels", "--kappa", "1"], ["entropy", "--tol", "0"], ["reproduce", "IV"],
    ["state", "--n", "1", "--emit-grid", "--emit-momentum"],
])
def test_config_errors_exit_2(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("PDM_QUAD_TOL", "1e-8")
    code, out, _ = run(capsys, "entropy", "--n", "0", "--a", "2")
    assert code == 0
    monkeypatch.setenv("PDM_QUAD_TOL", "-1")
    assert run(capsys, "entropy", "--n", "0")[0] == 2


def test_module_entry():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "pdmwell", "levels", "--n-max", "1"],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and r.stdout.startswith("n,kappa,E,admissible")
