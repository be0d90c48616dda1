"""Table reproduction against embedded reference values, and measure sweeps."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import model
from .fdsolver import FDSpec
from .infotheory import entropy_report, fisher_report, shannon_momentum, shannon_position, variances
from .model import ModelParams
from .refdata import evaluate, load_tables, table_data
from .quadrature import QuadratureSpec, default_spec, fourier_integral, integrate
from .states import REGISTRY, QuantumNumbers, build_state

__all__ = [
    "COMMANDS",
    "RunConfig",
    "ComparisonCell",
    "ComparisonReport",
    "reproduce",
    "scan",
    "entropy_rows",
    "fisher_rows",
    "closed_form_grid",
]

COMMANDS = ("levels", "state", "entropy", "fisher", "reproduce", "spectrum-fd", "validate", "scan")

TOL_TABLE_II = 2e-3  # absolute, 4-decimal entries
TOL_TABLE_III = 1e-9  # relative, closed forms
TOL_POINTWISE = 1e-8
TOL_NORM = 1e-10


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: ModelParams = field(default_factory=ModelParams)
    quantum: QuantumNumbers | None = None
    quad: QuadratureSpec = field(default_factory=default_spec)
    fd: FDSpec | None = None
    out: str | None = None
    fmt: str = "csv"
    a_list: tuple[float, ...] | None = None
    table: str | None = None
    n_max: int = 3
    jobs: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.a_list is not None:
            if not self.a_list or any(not (a > 0) for a in self.a_list):
                raise ValueError("a_list must be a non-empty list of positive widths")
        if self.command == "state" and self.quantum is None:
            raise ValueError("state needs --n (and optionally --kappa)")
        if self.command == "reproduce" and self.table not in ("I", "II", "III"):
            raise ValueError("reproduce needs a table: I, II or III")
        if self.n_max < 0 or self.jobs < 1:
            raise ValueError("n_max must be >= 0 and jobs >= 1")

    def widths(self) -> tuple[float, ...]:
        return self.a_list or (self.model.a,)


def closed_form_grid() -> list[QuantumNumbers]:
    """States with closed-form momentum amplitudes, in (n, kappa) order."""
    return [QuantumNumbers(n, k) for n, k in sorted(REGISTRY)]


# -- comparison ---------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonCell:
    table: str
    n: int
    kappa: int
    a: float
    quantity: str
    printed: float | str
    reference: float
    computed: float
    error: float
    tolerance: float
    tol_kind: str
    status: str  # pass | fail | erratum
    note: str = ""

    def as_row(self) -> dict:
        return {
            "table": self.table, "n": self.n, "kappa": self.kappa, "a": self.a,
            "quantity": self.quantity, "printed": self.printed, "reference": self.reference,
            "computed": self.computed, "error": self.error, "tolerance": self.tolerance,
            "tol_kind": self.tol_kind, "status": self.status, "note": self.note,
        }


COMPARISON_COLUMNS = list(ComparisonCell.__dataclass_fields__)


@dataclass
class ComparisonReport:
    table: str
    cells: list[ComparisonCell]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.cells)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "erratum": 0}
        for c in self.cells:
            out[c.status] += 1
        return out

    def row_status(self) -> dict:
        """Per parameter row: 'erratum' if any cell is, else 'fail'/'pass'."""
        rows: dict[tuple, str] = {}
        for c in self.cells:
            key = (c.n, c.kappa, c.a)
            cur = rows.get(key, "pass")
            if c.status == "fail" or cur == "fail":
                rows[key] = "fail"
            elif c.status == "erratum" or cur == "erratum":
                rows[key] = "erratum"
            else:
                rows[key] = "pass"
        return rows

    def summary(self) -> dict:
        rs = list(self.row_status().values())
        return {
            "table": self.table, "cells": self.counts(), "rows": len(rs),
            "rows_pass": rs.count("pass"), "rows_erratum": rs.count("erratum"),
            "rows_fail": rs.count("fail"), "passed": self.passed,
        }


def _cell(table, q, a, quantity, printed, reference, computed, tol, kind, erratum=False, note=""):
    diff = abs(computed - reference)
    err = diff / abs(reference) if kind == "rel" else diff
    ok = err <= tol
    status = ("erratum" if ok else "fail") if erratum else ("pass" if ok else "fail")
    return ComparisonCell(table, q.n, q.kappa, float(a), quantity, printed, float(reference),
                          float(computed), float(err), tol, kind, status, note)


def _by_row(data):
    rows: dict[tuple, list] = {}
    for d in data:
        rows.setdefault((d.n, d.kappa, d.a), []).append(d)
    return rows


def _reproduce_II(cfg: RunConfig) -> list[ComparisonCell]:
    cells = []
    for (n, k, a), data in _by_row(table_data("II")).items():
        q = QuantumNumbers(n, k)
        s = build_state(q, replace(cfg.model, a=a), cfg.quad)
        sx = shannon_position(s, cfg.quad)
        sp = shannon_momentum(s, cfg.quad)
        computed = {"S_x": sx, "S_p": sp, "sum": sx + sp}
        for d in data:
            note = f"printed {d.printed}; {d.justification}" if d.erratum else ""
            cells.append(_cell("II", q, a, d.quantity, d.printed, d.reference_value,
                               computed[d.quantity], TOL_TABLE_II, "abs", d.erratum, note))
    return cells


def _reproduce_III(cfg: RunConfig) -> list[ComparisonCell]:
    from .infotheory import fisher_momentum, fisher_position

    cells = []
    for (n, k, a), data in _by_row(table_data("III")).items():
        q = QuantumNumbers(n, k)
        s = build_state(q, replace(cfg.model, a=a), cfg.quad)
        vx, vp = variances(s, cfg.quad)
        computed = {"F_x": fisher_position(s, cfg.quad), "F_p": fisher_momentum(s, cfg.quad),
                    "var_x": vx, "var_p": vp}
        for d in data:
            note = f"printed {d.printed}; {d.justification}" if d.erratum else ""
            cells.append(_cell("III", q, a, d.quantity, d.printed, d.reference_value,
                               computed[d.quantity], TOL_TABLE_III, "rel", d.erratum, note))
    return cells


def _align_phase(ref, vals):
    """Unimodular c minimising |ref - c*vals|, and the residual sup-norm."""
    c = np.vdot(vals, ref) / np.vdot(vals, vals)
    c = c / abs(c)
    return c, float(np.max(np.abs(ref - c * vals)))


def _phase_label(c) -> str:
    ang = cmath.phase(c) / (0.5 * math.pi)
    k = round(ang) % 4
    if abs(ang - round(ang)) < 1e-6:
        return ("1", "i", "-1", "-i")[k]
    return f"exp({cmath.phase(c):.6f}i)"


def _reproduce_I(cfg: RunConfig) -> list[ComparisonCell]:
    p = cfg.model
    a = p.a
    env = {"a": a, "hbar": p.hbar, "m0": p.m0, "V0": p.V0}
    xs = np.linspace(-10.0 / a, 10.0 / a, 2001)
    ps = np.linspace(-10.0 * a, 10.0 * a, 400)  # even count: p = 0 not sampled
    cells = []
    for e in load_tables()["table_I"]:
        q = QuantumNumbers(e["n"], e["kappa"])
        s = build_state(q, p, cfg.quad)

        def psi_pr(x, _e=e["psi"]):
            return np.real(evaluate(_e, x=x, **env))

        def phi_pr(k, _e=e["phi"]):
            return evaluate(_e, p=k, **env) + 0j

        # narrow scale keeps cosh(a x)**k factors of the printed forms finite
        n_psi = integrate(lambda x: psi_pr(x) ** 2, cfg.quad, scale=0.1 / a).value
        n_phi = integrate(lambda k: np.abs(phi_pr(k)) ** 2, cfg.quad, breakpoints=(0.0,),
                          scale=0.1 * a).value
        cells.append(_cell("I", q, a, "psi_norm", e["psi"], 1.0, n_psi, TOL_NORM, "abs"))
        cells.append(_cell("I", q, a, "phi_norm", e["phi"], 1.0, n_phi, TOL_NORM, "abs"))

        ours = s.psi(xs)
        sign = 1.0 if np.dot(ours, psi_pr(xs)) >= 0 else -1.0
        sup = float(np.max(np.abs(psi_pr(xs) - sign * ours)))
        cells.append(_cell("I", q, a, "psi_pointwise", e["psi"], 0.0, sup, TOL_POINTWISE, "abs",
                           note=f"relative sign {'+' if sign > 0 else '-'}"))

        num = fourier_integral(s.psi, ps, cfg.quad, scale=1.0 / a).value
        c, sup = _align_phase(phi_pr(ps), num)
        cells.append(_cell("I", q, a, "phi_vs_numeric_ft", e["phi"], 0.0, sup, TOL_POINTWISE, "abs",
                           note=f"global phase {_phase_label(c)}"))
        sup_reg = float(np.max(np.abs(s.phi(ps) - num)))
        cells.append(_cell("I", q, a, "registry_vs_numeric_ft", "", 0.0, sup_reg, TOL_POINTWISE, "abs"))

        e_pr = float(evaluate(e["energy"], **env))
        cells.append(_cell("I", q, a, "energy", e["energy"], e_pr, s.energy, 1e-12, "abs"))
    return cells


def reproduce(table: str, cfg: RunConfig) -> ComparisonReport:
    """Compute every published cell of ``table`` and compare.

    Tables II and III are evaluated at their own widths (``cfg.model.a``
    is ignored); Table I is checked at ``cfg.model.a``.
    """
    fn = {"I": _reproduce_I, "II": _reproduce_II, "III": _reproduce_III}.get(table)
    if fn is None:
        raise ValueError(f"unknown table {table!r}")
    return ComparisonReport(table, fn(cfg))


# -- sweeps -------------------------------------------------------------------

SCAN_COLUMNS = ["n", "kappa", "a", "S_x", "S_p", "F_x", "F_p", "var_x", "var_p"]


def _states(cfg: RunConfig) -> list[QuantumNumbers]:
    if cfg.quantum is not None:
        return [cfg.quantum]
    return [q for q in closed_form_grid() if q.n <= cfg.n_max]


def _cells(cfg):
    return [(q, a) for q in _states(cfg) for a in cfg.widths()]


def _fan_out(fn, cfg):
    cells = _cells(cfg)
    if cfg.jobs == 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
        return list(ex.map(fn, cells))  # map preserves input order


def scan(cfg: RunConfig) -> list[dict]:
    """Entropies, Fisher informations and variances over (n, kappa, a)."""

    def one(cell):
        q, a = cell
        s = build_state(q, replace(cfg.model, a=a), cfg.quad)
        er = entropy_report(s, cfg.quad)
        fr = fisher_report(s, cfg.quad)
        return {"n": q.n, "kappa": q.kappa, "a": a, "S_x": er.S_x, "S_p": er.S_p,
                "F_x": fr.F_x, "F_p": fr.F_p, "var_x": fr.var_x, "var_p": fr.var_p}

    return _fan_out(one, cfg)


def entropy_rows(cfg: RunConfig) -> list[dict]:
    def one(cell):
        q, a = cell
        return entropy_report(build_state(q, replace(cfg.model, a=a), cfg.quad), cfg.quad)

    return _fan_out(one, cfg)


def fisher_rows(cfg: RunConfig) -> list[dict]:
    def one(cell):
        q, a = cell
        return fisher_report(build_state(q, replace(cfg.model, a=a), cfg.quad), cfg.quad)

    return _fan_out(one, cfg)


def levels(cfg: RunConfig) -> list[dict]:
    """Energy ladder n = 0..n_max with admissibility for the potential's kappa."""
    k = model.consistent_kappa(cfg.model)
    rows = []
    for n in range(cfg.n_max + 1):
        rows.append({
            "n": n, "E": model.energy_level(n, cfg.model),
            "kappa": "" if k is None else k,
            "admissible": True if k is None else n >= k,
        })
    return rows
