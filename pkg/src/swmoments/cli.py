"""Command-line interface.

Subcommands:
  coeffs     dump the closure tensors A, B, D for an order N
  matrix     print a model system matrix at a state, primitive or convective
  eigen      spectral report (eigenvalues, hyperbolicity, analytic gap)
  hypregion  hyperbolicity raster over scaled moment coordinates, as CSV
  steady     conjugate-depth root table for given Fr and moment numbers
  simulate   run a scenario config, writing snapshots and diagnostics
  compare    run the model-vs-SWME error table of a scenario config

Exit codes: 0 success, 1 usage error, 2 numerical failure. All numbers are
printed with 17 significant digits so CSV outputs round-trip bit-exactly;
identical argv and config produce byte-identical CSVs. The output directory
is the current directory unless --outdir or SWMOMENTS_OUTDIR overrides it.
Values that start with a minus sign must use the equals form, e.g.
--a=-0.25,0 or --range=-6,6,-6,6.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .basis import coefficient_tensors
from .models import ModelKind, build_system_matrix
from .scenarios import (
    ScenarioConfig,
    run_comparison,
    timed,
    write_diagnostics_csv,
    write_manifest,
    write_snapshot_csv,
    initial_field,
)
from .solver import SolverError, run
from .spectral import SpectralError, analytic_eigenvalues, numeric_spectrum, scan_hyperbolicity_region
from .state import DryStateError, PrimitiveState
from .steady import ReferenceState, conjugate_depths

F = "{:.17g}".format


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",") if v != ""])
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got '{text}'")


def _model(name: str) -> ModelKind:
    try:
        return ModelKind.parse(name)
    except ValueError as exc:
        raise UsageError(str(exc))


def _state(args) -> PrimitiveState:
    alpha = _parse_floats(args.a)
    if args.N is not None and args.N != alpha.size:
        raise UsageError(f"--N {args.N} conflicts with {alpha.size} moment values in --a")
    return PrimitiveState(h=args.h, u_m=args.um, alpha=alpha)


def _outdir(args) -> Path:
    out = args.outdir or os.environ.get("SWMOMENTS_OUTDIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def build_parser() -> _Parser:
    p = _Parser(prog="swmoments", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="dump closure tensors")
    c.add_argument("N", type=int)

    def add_state_args(sp):
        sp.add_argument("--model", required=True)
        sp.add_argument("--N", type=int, default=None)
        sp.add_argument("--h", type=float, required=True)
        sp.add_argument("--um", type=float, required=True)
        sp.add_argument("--a", required=True, help="comma-separated alpha_1..alpha_N")
        sp.add_argument("--g", type=float, default=1.0)

    m = sub.add_parser("matrix", help="print a system matrix")
    add_state_args(m)
    m.add_argument("--vars", choices=["p", "c"], default="c")

    e = sub.add_parser("eigen", help="spectral report for a state")
    add_state_args(e)

    hr = sub.add_parser("hypregion", help="hyperbolicity region raster CSV")
    hr.add_argument("--model", required=True)
    hr.add_argument("--N", type=int, required=True)
    hr.add_argument("--range", dest="ranges", required=True,
                    help="lo,hi per scanned axis, e.g. -6,6,-6,6")
    hr.add_argument("--res", type=int, default=201)
    hr.add_argument("--g", type=float, default=1.0)
    hr.add_argument("--out", default=None, help="output CSV (default: stdout)")
    hr.add_argument("--outdir", default=None)

    st = sub.add_parser("steady", help="conjugate-depth root table")
    st.add_argument("--model", required=True)
    st.add_argument("--fr", type=float, required=True)
    st.add_argument("--ma", default="0", help="comma-separated Ma_1..Ma_N")
    st.add_argument("--g", type=float, default=1.0)
    st.add_argument("--h0", type=float, default=1.0)

    for name in ("simulate", "compare"):
        sp = sub.add_parser(name, help=f"{name} a scenario config (JSON)")
        sp.add_argument("--config", required=True)
        sp.add_argument("--outdir", default=None)
    return p


def _cmd_coeffs(args) -> int:
    if not 1 <= args.N <= 12:
        raise UsageError(f"moment order must be in 1..12, got {args.N}")
    tensors = coefficient_tensors(args.N)
    out = sys.stdout
    out.write("tensor,i,j,k,value\n")
    N = args.N
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                out.write(f"A,{i},{j},{k},{F(tensors.A[i, j, k])}\n")
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                out.write(f"B,{i},{j},{k},{F(tensors.B[i, j, k])}\n")
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            out.write(f"D,{i},{j},,{F(tensors.D[i, j])}\n")
    return 0


def _cmd_matrix(args) -> int:
    model = _model(args.model)
    state = _state(args)
    tensors = coefficient_tensors(state.N)
    varset = "primitive" if args.vars == "p" else "convective"
    A = build_system_matrix(model, varset, state, tensors, args.g)
    for row in A.entries:
        sys.stdout.write(",".join(F(v) for v in row) + "\n")
    return 0


def _cmd_eigen(args) -> int:
    model = _model(args.model)
    state = _state(args)
    tensors = coefficient_tensors(state.N)
    A = build_system_matrix(model, "convective", state, tensors, args.g)
    report = numeric_spectrum(A, analytic=analytic_eigenvalues(model, state, args.g))
    for ev in report.eigenvalues:
        if ev.imag == 0.0:
            sys.stdout.write(F(ev.real) + "\n")
        else:
            sys.stdout.write(f"{F(ev.real)}{'+' if ev.imag >= 0 else '-'}{F(abs(ev.imag))}j\n")
    sys.stdout.write(f"hyperbolic,{int(report.hyperbolic)}\n")
    sys.stdout.write(f"max_imag,{F(report.max_imag)}\n")
    if report.analytic_available:
        sys.stdout.write(f"analytic_mismatch,{F(report.analytic_mismatch)}\n")
    return 0


def _cmd_hypregion(args) -> int:
    model = _model(args.model)
    vals = _parse_floats(args.ranges)
    if vals.size % 2 != 0 or vals.size == 0:
        raise UsageError("--range needs an even number of values (lo,hi per axis)")
    ranges = [(vals[2 * i], vals[2 * i + 1]) for i in range(vals.size // 2)]
    tensors = coefficient_tensors(args.N)
    scan = scan_hyperbolicity_region(model, args.N, ranges, args.res, tensors, g=args.g)
    if args.out is None:
        k = len(scan.axes)
        sys.stdout.write(",".join(f"a_{i+1}" for i in range(k)) + ",hyperbolic\n")
        grids = np.meshgrid(*scan.axes, indexing="ij")
        flat = scan.verdicts.ravel()
        cols = [gg.ravel() for gg in grids]
        for r in range(flat.size):
            sys.stdout.write(
                ",".join(F(c[r]) for c in cols) + f",{int(flat[r])}\n"
            )
    else:
        path = _outdir(args) / args.out
        scan.write_csv(path)
        sys.stdout.write(f"{path}\n")
    return 0


def _cmd_steady(args) -> int:
    model = _model(args.model)
    ma = _parse_floats(args.ma)
    h0 = args.h0
    u_m0 = args.fr * np.sqrt(args.g * h0)
    alpha0 = ma * u_m0
    ref = ReferenceState(h0=h0, u_m0=u_m0, alpha0=alpha0, g=args.g)
    res = conjugate_depths(model, ref)
    sys.stdout.write("fr," + ",".join(f"ma_{i+1}" for i in range(ma.size)) + ",branch,root\n")
    prefix = F(args.fr) + "," + ",".join(F(v) for v in ma)
    sys.stdout.write(f"{prefix},trivial,{F(res.trivial)}\n")
    for r in res.roots:
        sys.stdout.write(f"{prefix},conjugate,{F(r)}\n")
    if res.roots.size == 0:
        sys.stdout.write(f"{prefix},no-positive-root,\n")
    return 0


def _load_config(path: str) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}")
    try:
        return ScenarioConfig.from_json(text)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"bad scenario config: {exc}")


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    outdir = _outdir(args)
    outputs = []
    status = {}

    def job():
        tensors_cache = {}
        names = dict.fromkeys((ModelKind.SWME.value,) + tuple(cfg.models))
        for name in names:
            model = ModelKind.parse(name)
            for N in cfg.orders:
                tensors = tensors_cache.setdefault(N, coefficient_tensors(N))
                key = (model.value, N)
                try:
                    result = run(initial_field(cfg, N), cfg.solver_config(model, N), tensors)
                except (SolverError, DryStateError):
                    status[key] = "skipped-unstable"
                    continue
                snap = outdir / f"{cfg.name}_{model.value}_N{N}_snapshot.csv"
                diag = outdir / f"{cfg.name}_{model.value}_N{N}_diagnostics.csv"
                write_snapshot_csv(result.field, snap)
                write_diagnostics_csv(result, diag)
                outputs.extend([snap, diag])
                status[key] = "ok"

    _, started, finished = timed(job)
    manifest = outdir / f"{cfg.name}_manifest.json"
    write_manifest(manifest, cfg, outputs, status, finished - started, started, finished)
    sys.stdout.write(f"{manifest}\n")
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_config(args.config)
    outdir = _outdir(args)
    result, started, finished = timed(run_comparison, cfg)
    table = outdir / f"{cfg.name}_errors.csv"
    result.write_csv(table)
    write_manifest(
        outdir / f"{cfg.name}_manifest.json", cfg, [table], result.run_status,
        finished - started, started, finished,
    )
    sys.stdout.write(f"{table}\n")
    return 0


_COMMANDS = {
    "coeffs": _cmd_coeffs,
    "matrix": _cmd_matrix,
    "eigen": _cmd_eigen,
    "hypregion": _cmd_hypregion,
    "steady": _cmd_steady,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
}


def cli_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except (DryStateError, SolverError, SpectralError, ValueError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
