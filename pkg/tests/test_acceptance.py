"""Acceptance criteria, one test per criterion, tolerances as stated."""

import math
import time

import numpy as np
import pytest

from pdmwell import fdsolver
from pdmwell.fdsolver import FDSpec
from pdmwell.infotheory import BBM_BOUND, entropy_report, entropy_sum_invariance, fisher_report
from pdmwell.model import ModelParams
from pdmwell.reports import RunConfig, closed_form_grid, reproduce
from pdmwell.states import QuantumNumbers, build_state
from pdmwell.validation import validate

WIDTHS = (1.0, 2.0, 4.0, 6.0)


@pytest.fixture(scope="module")
def grid_reports():
    out = {}
    for q in closed_form_grid():
        for a in WIDTHS:
            s = build_state(q, ModelParams(a=a))
            out[(q.n, q.kappa, a)] = (entropy_report(s), fisher_report(s))
    return out


@pytest.mark.criterion(1, "Table III closed forms within 1e-9 relative")
def test_table_iii_exact():
    t0 = time.perf_counter()
    rep = reproduce("III", RunConfig("reproduce", table="III"))
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    s = rep.summary()
    assert s["rows_fail"] == 0 and rep.exit_code == 0
    assert s["rows"] == 21 and s["rows_pass"] == 20 and s["rows_erratum"] == 1
    for c in rep.cells:
        assert c.tol_kind == "rel" and c.tolerance == 1e-9
        assert c.error <= 1e-9, c
    first = {c.quantity: c.computed for c in rep.cells if (c.n, c.kappa, c.a) == (0, 0, 2.0)}
    assert first["F_x"] == pytest.approx(16 / 3, rel=1e-9)
    assert first["F_p"] == pytest.approx(math.pi**2 / 12, rel=1e-9)
    assert first["var_x"] == pytest.approx(math.pi**2 / 48, rel=1e-9)
    assert first["var_p"] == pytest.approx(4 / 3, rel=1e-9)


@pytest.mark.criterion(2, "Table II within 2e-3; two errata match derived values")
def test_table_ii():
    t0 = time.perf_counter()
    rep = reproduce("II", RunConfig("reproduce", table="II"))
    assert time.perf_counter() - t0 < 30.0
    rows = rep.row_status()
    errata = {k for k, v in rows.items() if v == "erratum"}
    assert errata == {(2, 1, 6.0), (2, 2, 4.0)}
    assert all(v == "pass" for k, v in rows.items() if k not in errata)
    for c in rep.cells:
        assert c.tolerance == 2e-3 and c.tol_kind == "abs"
        assert c.status != "fail", c
    flagged = {(c.n, c.kappa, c.a): c for c in rep.cells if c.status == "erratum"}
    assert flagged[(2, 1, 6.0)].reference == pytest.approx(-0.6861)
    assert flagged[(2, 2, 4.0)].reference == pytest.approx(-0.7806)
    assert abs(flagged[(2, 1, 6.0)].computed + 0.6861) <= 2e-3
    assert abs(flagged[(2, 2, 4.0)].computed + 0.7806) <= 2e-3


SUMS = {(0, 0): 2.1622, (1, 0): 2.9572, (1, 1): 2.1512, (2, 0): 3.3278,
        (2, 1): 2.8372, (2, 2): 2.1481, (3, 0): 3.5820}


@pytest.mark.criterion(3, "S_x + S_p invariant over a to 1e-9, matches sum column")
def test_entropy_sum_invariance():
    assert {(q.n, q.kappa) for q in closed_form_grid()} == set(SUMS)
    for q in closed_form_grid():
        spread, sums = entropy_sum_invariance(q, WIDTHS)
        assert spread <= 1e-9, (q, spread)
        assert abs(np.mean(sums) - SUMS[(q.n, q.kappa)]) <= 2e-3


@pytest.mark.criterion(4, "BBM bound on every state; positive minimum slack")
def test_bbm(grid_reports, capsys):
    slack = {k: er.sum - BBM_BOUND for k, (er, _) in grid_reports.items()}
    assert all(er.bbm_satisfied for er, _ in grid_reports.values())
    worst = min(slack, key=slack.get)
    assert slack[worst] > 0
    assert worst[:2] == (2, 2)
    assert slack[worst] == pytest.approx(2.1481 - 2.1447, abs=2e-4)
    with capsys.disabled():
        print(f"\n    min BBM slack {slack[worst]:.6f} at (n, kappa, a) = {worst}")


@pytest.mark.criterion(5, "F_x = 4 var_p, F_p = 4 var_x to 1e-8; F_x F_p >= 4")
def test_fisher_variance_uncertainty(grid_reports):
    for key, (_, fr) in grid_reports.items():
        assert abs(fr.F_x - 4 * fr.var_p) / fr.F_x <= 1e-8, key
        assert abs(fr.F_p - 4 * fr.var_x) / fr.F_p <= 1e-8, key
        assert fr.F_x * fr.F_p >= 4.0, key


@pytest.mark.criterion(6, "FD oracle levels within 5e-3, second-order convergence, kappa=1 ladder")
def test_fd_spectrum():
    t0 = time.perf_counter()
    p = ModelParams(m0=1.0, a=1.0, hbar=1.0)
    sr = fdsolver.solve(p, FDSpec(L=12.0, N=4001, n_eigen=4))
    assert np.max(np.abs(sr.eigenvalues - [0, 1, 3, 6])) <= 5e-3
    assert np.all(np.diff(sr.eigenvalues) > 0)

    # the kappa=0 ground level is exact on this grid, so the h^2 rate is
    # read off the lowest level whose discretisation error is non-zero
    p1 = ModelParams(V1=0.5)
    err = [abs(fdsolver.solve(p1, FDSpec(L=12.0, N=N, n_eigen=1)).eigenvalues[0] - 1.0)
           for N in (1001, 2001)]
    assert 3.5 <= err[0] / err[1] <= 4.5
    err = [abs(fdsolver.solve(p, FDSpec(L=12.0, N=N, n_eigen=2)).eigenvalues[1] - 1.0)
           for N in (1001, 2001)]
    assert 3.5 <= err[0] / err[1] <= 4.5

    sr1 = fdsolver.solve(p1, FDSpec(L=12.0, N=4001, n_eigen=3))
    assert np.max(np.abs(sr1.eigenvalues - [1, 3, 6])) <= 5e-3
    assert time.perf_counter() - t0 < 20.0


@pytest.mark.criterion(7, "Table I: normalisation 1e-10, FT 1e-8 sup, FD overlaps >= 1 - 1e-5")
def test_table_i():
    rep = reproduce("I", RunConfig("reproduce", table="I"))
    assert rep.exit_code == 0
    assert rep.summary()["rows_pass"] == 7
    tol = {"psi_norm": 1e-10, "phi_norm": 1e-10, "phi_vs_numeric_ft": 1e-8,
           "registry_vs_numeric_ft": 1e-8, "psi_pointwise": 1e-8}
    for c in rep.cells:
        if c.quantity in tol:
            assert c.error <= tol[c.quantity], c
    p = ModelParams()
    sr = fdsolver.solve(p, FDSpec(L=12.0, N=4001, n_eigen=4))
    rows = fdsolver.cross_validate(sr, [build_state(QuantumNumbers(n), p) for n in range(4)])
    assert all(r.overlap >= 1 - 1e-5 for r in rows)


@pytest.mark.criterion(8, "validate: all property suites pass in < 60 s")
def test_validate_suite():
    t0 = time.perf_counter()
    rep = validate()
    elapsed = time.perf_counter() - t0
    names = {s.name for s in rep.suites}
    assert {"normalization", "parity", "nodes", "orthogonality", "parseval", "residual",
            "matching", "scaling-law", "bbm", "fisher-variance", "uncertainty-product",
            "fd-cross-validation"} <= names
    assert rep.passed, rep.first_failure
    assert elapsed < 60.0
