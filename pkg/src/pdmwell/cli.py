"""Command-line interface: ``pdmwell <command> [options]``.

Exit codes: 0 success, 1 comparison/validation/computation failure,
2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import fdsolver, model, output, reports, validation
from .fdsolver import FDSpec
from .infotheory import FisherReport
from .model import ModelParams
from .quadrature import default_spec, fourier_transform, integrate
from .reports import RunConfig
from .states import QuantumNumbers, build_state

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def _float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    g = c.add_argument_group("model")
    g.add_argument("--m0", type=float, default=1.0, help="mass scale m0 (default 1)")
    g.add_argument("--a", type=float, default=1.0, help="width parameter a (default 1)")
    g.add_argument("--hbar", type=float, default=1.0)
    g.add_argument("--v0", type=float, default=0.0, help="tanh^2 coefficient V0")
    g.add_argument("--v1", type=float, default=0.0, help="constant offset V1")
    g.add_argument("--bare-argument", action="store_true",
                   help="use sinh(x), cosh(x) in the potential instead of sinh(ax), cosh(ax)")
    g = c.add_argument_group("state and grid")
    g.add_argument("--n", type=int, help="principal quantum number")
    g.add_argument("--kappa", type=int, help="order kappa, |kappa| <= n (default 0)")
    g.add_argument("--n-max", type=int, default=3, help="largest n for ladders and default sweeps")
    g.add_argument("--a-list", type=_float_list, help="comma-separated widths, e.g. 2,4,6")
    g.add_argument("--grid-n", type=int, help="grid points (state grids, FD solver)")
    g.add_argument("--half-width", type=float, help="grid half-width L")
    g.add_argument("--n-eigen", type=int, default=4, help="FD eigenpairs requested")
    g.add_argument("--boundary", choices=("neumann", "dirichlet"), default="neumann",
                   help="FD boundary condition")
    g = c.add_argument_group("numerics and output")
    g.add_argument("--tol", type=float, help="quadrature relative tolerance (overrides PDM_QUAD_TOL)")
    g.add_argument("--quad-method", choices=("double-exponential", "mapped-Gauss"),
                   default="double-exponential")
    g.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--out", help="output file (default stdout)")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="pdmwell", description=(
        "Bound states, information measures and finite-difference checks for a particle "
        "with solitonic mass m0 sech^2(ax) in a hyperbolic well."))
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    sub.add_parser("levels", parents=[common], help="energy ladder and admissibility")
    sp = sub.add_parser("state", parents=[common], help="one bound state (summary or grid)")
    sp.add_argument("--emit-grid", action="store_true", help="CSV x,psi,density on a uniform grid")
    sp.add_argument("--emit-momentum", action="store_true",
                    help="numerically transformed amplitude: CSV xi,re,im,density")
    sub.add_parser("entropy", parents=[common], help="Shannon entropies and the BBM check")
    sub.add_parser("fisher", parents=[common], help="Fisher information, variances, uncertainty")
    sp = sub.add_parser("reproduce", parents=[common], help="compare against the embedded reference tables")
    sp.add_argument("table", choices=("I", "II", "III"))
    sub.add_parser("spectrum-fd", parents=[common], help="finite-difference spectrum vs analytic")
    sp = sub.add_parser("validate", parents=[common], help="run all self-check suites")
    sp.add_argument("--suite", action="append", choices=list(validation.SUITES),
                    help="run only this suite (repeatable)")
    sp.add_argument("--inject-fault", choices=validation.FAULTS, help=argparse.SUPPRESS)
    sub.add_parser("scan", parents=[common], help="measures over an (n, kappa, a) grid")
    return ap


def config_from_args(args) -> RunConfig:
    p = ModelParams(m0=args.m0, a=args.a, hbar=args.hbar, V0=args.v0, V1=args.v1,
                    bare_argument=args.bare_argument)
    quad = default_spec()
    quad = replace(quad, method=args.quad_method)
    if args.tol is not None:
        quad = replace(quad, rel_tol=args.tol)
    q = None
    if args.n is not None:
        q = QuantumNumbers(args.n, 0 if args.kappa is None else args.kappa)
    elif args.kappa is not None:
        raise ConfigError("--kappa needs --n")
    if args.grid_n is not None and args.grid_n < 2:
        raise ConfigError("--grid-n must be >= 2")
    if args.half_width is not None and not args.half_width > 0:
        raise ConfigError("--half-width must be positive")
    fd = None
    if args.command == "spectrum-fd":
        fd = FDSpec(L=args.half_width, N=args.grid_n or 4001, n_eigen=args.n_eigen,
                    boundary=args.boundary)
        fd.validate(p)
    return RunConfig(
        command=args.command, model=p, quantum=q, quad=quad, fd=fd, out=args.out,
        fmt=args.format, a_list=args.a_list, table=getattr(args, "table", None),
        n_max=args.n_max, jobs=args.jobs,
    )


# -- commands -------------------------------------------------------------------

def _tabular(cfg, rows, columns, extra=None) -> str:
    if cfg.fmt == "csv":
        return output.rows_to_csv(rows, columns)
    payload = {"rows": [{c: r.get(c) for c in columns} | (extra(i) if extra else {})
                        for i, r in enumerate(rows)]}
    return output.rows_to_json(payload)


def cmd_levels(cfg, args):
    rows = reports.levels(cfg)
    output.emit(_tabular(cfg, rows, ["n", "kappa", "E", "admissible"]), cfg.out)
    return EXIT_OK


def cmd_state(cfg, args):
    p = cfg.model
    s = build_state(cfg.quantum, p, cfg.quad)
    if args.emit_grid and args.emit_momentum:
        raise ConfigError("choose one of --emit-grid and --emit-momentum")
    npts = args.grid_n or 2001
    if args.emit_grid:
        L = args.half_width or 10.0 / p.a
        x = np.linspace(-L, L, npts)
        psi = s.psi(x)
        rows = [{"x": xi, "psi": v, "density": v * v} for xi, v in zip(x, psi)]
        output.emit(_tabular(cfg, rows, ["x", "psi", "density"]), cfg.out)
        return EXIT_OK
    if args.emit_momentum:
        L = args.half_width or 10.0 * p.a
        gf = fourier_transform(s.psi, np.linspace(-L, L, npts), cfg.quad, scale=1.0 / p.a)
        if cfg.fmt == "csv":
            text = gf.to_csv()
        else:
            text = output.rows_to_json({
                "xi": gf.points, "re": gf.values.real, "im": gf.values.imag,
                "density": gf.density, "parseval_defect": gf.parseval_defect,
            })
        output.emit(text, cfg.out)
        return EXIT_OK
    norm = integrate(s.density, cfg.quad, breakpoints=tuple(s.nodes()), scale=1.0 / p.a).value
    row = {
        "n": s.q.n, "kappa": s.q.kappa, "a": p.a, "energy": s.energy, "norm_const": s.norm_const,
        "parity": s.parity, "node_count": s.q.node_count, "normalization_defect": abs(norm - 1.0),
        "potential_kappa": model.consistent_kappa(p),
    }
    output.emit(_tabular(cfg, [row], list(row)), cfg.out)
    return EXIT_OK


ENTROPY_COLUMNS = ["n", "kappa", "a", "S_x", "S_p", "sum", "bbm_bound", "pass"]
FISHER_COLUMNS = ["n", "kappa", "a", "F_x", "F_p", "var_x", "var_p",
                  "rel_x_residual", "rel_p_residual", "product"]


def cmd_entropy(cfg, args):
    reps = reports.entropy_rows(cfg)
    text = _tabular(cfg, [r.as_row() for r in reps], ENTROPY_COLUMNS,
                    extra=lambda i: {"quad_error": reps[i].quad_error})
    output.emit(text, cfg.out)
    return EXIT_OK if all(r.bbm_satisfied for r in reps) else EXIT_FAIL


def cmd_fisher(cfg, args):
    reps: list[FisherReport] = reports.fisher_rows(cfg)
    text = _tabular(cfg, [r.as_row() for r in reps], FISHER_COLUMNS,
                    extra=lambda i: {"quad_error": reps[i].quad_error})
    output.emit(text, cfg.out)
    return EXIT_OK


def cmd_reproduce(cfg, args):
    rep = reports.reproduce(cfg.table, cfg)
    rows = [c.as_row() for c in rep.cells]
    if cfg.fmt == "csv":
        text = output.rows_to_csv(rows, reports.COMPARISON_COLUMNS)
    else:
        text = output.rows_to_json({"summary": rep.summary(), "cells": rows})
    output.emit(text, cfg.out)
    s = rep.summary()
    print(f"table {cfg.table}: {s['rows']} rows, {s['rows_pass']} pass, {s['rows_erratum']} erratum, "
          f"{s['rows_fail']} fail", file=sys.stderr)
    return rep.exit_code


FD_COLUMNS = ["level", "E_fd", "E_analytic", "abs_err", "overlap"]


def cmd_spectrum_fd(cfg, args):
    sr = fdsolver.solve(cfg.model, cfg.fd)
    if model.consistent_kappa(cfg.model) is not None:
        analytic = fdsolver.analytic_ladder(cfg.model, len(sr.eigenvalues), cfg.quad)
        rows = [r.as_row() for r in fdsolver.cross_validate(sr, analytic, cfg.quad)]
    else:
        # no closed form for non-integer kappa: FD levels only
        rows = [{"level": i, "E_fd": e} for i, e in enumerate(sr.eigenvalues)]
    extra = lambda i: {"residual_norm": sr.residual_norms[i],  # noqa: E731
                       "boundary_amplitude": sr.boundary_amplitude[i]}
    output.emit(_tabular(cfg, rows, FD_COLUMNS, extra=extra), cfg.out)
    if sr.n_filtered:
        print(f"{sr.n_filtered} box-artifact level(s) filtered", file=sys.stderr)
    return EXIT_OK


def cmd_validate(cfg, args):
    rep = validation.validate(cfg.model, cfg.quad, fault=args.inject_fault, suites=args.suite)
    if cfg.fmt == "csv":
        text = output.rows_to_csv([s.as_row() for s in rep.suites],
                                  ["suite", "passed", "metric", "tolerance", "detail"])
    else:
        summary = rep.summary()
        for s in summary["suites"]:
            s.pop("seconds")  # keep output reproducible
        text = output.rows_to_json(summary)
    output.emit(text, cfg.out)
    ff = rep.first_failure
    if ff is not None:
        print(f"FAILED suite {ff.name}: metric {ff.metric:.3e} > {ff.tolerance:g}; {ff.detail}",
              file=sys.stderr)
    return rep.exit_code


def cmd_scan(cfg, args):
    rows = reports.scan(cfg)
    output.emit(_tabular(cfg, rows, reports.SCAN_COLUMNS), cfg.out)
    return EXIT_OK


COMMANDS = {
    "levels": cmd_levels, "state": cmd_state, "entropy": cmd_entropy, "fisher": cmd_fisher,
    "reproduce": cmd_reproduce, "spectrum-fd": cmd_spectrum_fd, "validate": cmd_validate,
    "scan": cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help, 2 for usage errors
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        cfg = config_from_args(args)
    except (ValueError, TypeError) as exc:
        print(f"pdmwell: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[cfg.command](cfg, args)
    except ConfigError as exc:
        print(f"pdmwell: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"pdmwell: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
