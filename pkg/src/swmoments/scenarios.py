"""Test-case definitions, initial data synthesis, and model-vs-reference errors.

A scenario bundles the grid, final time, gravity, friction, a piecewise
initial depth, a polynomial vertical velocity profile u(zeta), and the
(model, order) matrix to run. The stock case is the dam break

    h(0,x) = 1.5 for x <= 0, 1 for x > 0,     u(0,x,zeta) = 0.5 zeta

on x in [-1,1] with open boundaries, whose projection gives u_m = 0.25,
alpha_1 = -0.25, alpha_i = 0 for i >= 2.

Errors are discrete final-time L2 norms of primitive variables relative to
the SWME run with the same number of moments. Runs that blow up (NaN or dry
cells) are marked, not crashed on.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .basis import coefficient_tensors, project_profile
from .models import ModelKind
from .solver import Field1D, Friction, RunResult, SolverConfig, SolverError, run
from .state import DryStateError

ERROR_VARIABLES_MAX = 2  # report h, u_m, alpha_1, alpha_2 (when present)
ZERO_NORM_FACTOR = 1e-10


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    x_min: float
    x_max: float
    n_cells: int
    t_end: float
    g: float = 1.0
    dt_mode: str = "cfl"
    cfl_number: float = 0.5
    dt: float | None = None
    friction_nu: float | None = None
    friction_lambda: float | None = None
    depth_x0: float = 0.0
    depth_left: float = 1.5
    depth_right: float = 1.0
    profile_coeffs: tuple = (0.0, 0.5)  # u(zeta) = sum_k c_k zeta^k
    models: tuple = tuple(m.value for m in ModelKind if m != ModelKind.SWME)
    orders: tuple = (2, 3, 4)
    boundary: str = "outflow"

    def friction(self) -> Friction | None:
        if self.friction_nu is None and self.friction_lambda is None:
            return None
        return Friction(nu=self.friction_nu, lambda_slip=self.friction_lambda)

    def solver_config(self, model: ModelKind, N: int) -> SolverConfig:
        return SolverConfig(
            model=model, N=N, t_end=self.t_end, g=self.g, dt_mode=self.dt_mode,
            cfl_number=self.cfl_number, dt=self.dt, friction=self.friction(),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ScenarioConfig":
        raw = json.loads(text)
        for key in ("profile_coeffs", "models", "orders"):
            if key in raw:
                raw[key] = tuple(raw[key])
        return cls(**raw)

    def config_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(asdict(self), sort_keys=True).encode()
        ).hexdigest()


def dam_break_config(**overrides) -> ScenarioConfig:
    """The stock dam-break comparison: open [-1,1], 1000 cells, t_end = 0.2,
    g = 1, CFL 0.5, Newtonian slip friction nu = lambda = 0.1."""
    base = dict(
        name="dambreak",
        x_min=-1.0, x_max=1.0, n_cells=1000, t_end=0.2, g=1.0,
        dt_mode="cfl", cfl_number=0.5,
        friction_nu=0.1, friction_lambda=0.1,
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def initial_field(cfg: ScenarioConfig, N: int) -> Field1D:
    """Cellwise initial data: stepped depth at cell centers, profile projection."""
    dx = (cfg.x_max - cfg.x_min) / cfg.n_cells
    centers = cfg.x_min + (np.arange(cfg.n_cells) + 0.5) * dx
    h = np.where(centers <= cfg.depth_x0, cfg.depth_left, cfg.depth_right).astype(float)
    coeffs = np.asarray(cfg.profile_coeffs, dtype=float)

    def u(zeta):
        return float(np.polyval(coeffs[::-1], zeta))

    u_m, alpha = project_profile(u, N)
    alpha_field = np.tile(alpha, (cfg.n_cells, 1))
    return Field1D.from_primitive(
        cfg.x_min, cfg.x_max, h, np.full(cfg.n_cells, u_m), alpha_field,
        boundary=cfg.boundary,
    )


def dam_break_init(cfg: ScenarioConfig, N: int) -> Field1D:
    """Initial field of the dam-break scenario (alias with the scenario's name)."""
    return initial_field(cfg, N)


@dataclass(frozen=True)
class ErrorValue:
    value: float
    absolute: bool  # True when the reference norm was ~0 and the error is absolute


def _variable_column(field: Field1D, variable: str) -> np.ndarray:
    h, u_m, alpha = field.primitive()
    if variable == "h":
        return h
    if variable == "u_m":
        return u_m
    if variable.startswith("alpha_"):
        i = int(variable.split("_")[1])
        if not 1 <= i <= field.N:
            raise ValueError(f"{variable} out of range for N={field.N}")
        return alpha[:, i - 1]
    raise ValueError(f"unknown variable '{variable}'")


def relative_error(field_a: Field1D, field_b: Field1D, variable: str) -> ErrorValue:
    """Discrete L2 error of `variable` in field_a relative to reference field_b."""
    if field_a.n_cells != field_b.n_cells or field_a.N != field_b.N:
        raise ValueError("fields must share the grid and the moment order")
    qa = _variable_column(field_a, variable)
    qb = _variable_column(field_b, variable)
    diff = float(np.linalg.norm(qa - qb))
    ref = float(np.linalg.norm(qb))
    if ref < ZERO_NORM_FACTOR * np.sqrt(field_b.n_cells):
        return ErrorValue(value=diff, absolute=True)
    return ErrorValue(value=diff / ref, absolute=False)


@dataclass(frozen=True)
class ComparisonRow:
    model: str
    N: int
    variable: str
    error: float | None
    absolute: bool
    status: str  # ok | failed | skipped-unstable


@dataclass(frozen=True)
class ComparisonResult:
    config: ScenarioConfig
    rows: list[ComparisonRow]
    run_status: dict  # (model, N) -> status string
    fields: dict  # (model, N) -> final Field1D for successful runs
    results: dict = field(default_factory=dict)  # (model, N) -> RunResult

    def error(self, model: str, N: int, variable: str) -> float | None:
        for r in self.rows:
            if r.model == model and r.N == N and r.variable == variable:
                return r.error
        return None

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("model,N,variable,rel_error,absolute,status\n")
            for r in self.rows:
                err = "" if r.error is None else f"{r.error:.17g}"
                fh.write(f"{r.model},{r.N},{r.variable},{err},{int(r.absolute)},{r.status}\n")


def _single_run(cfg: ScenarioConfig, model: ModelKind, N: int, tensors) -> tuple[str, RunResult | None]:
    try:
        field0 = initial_field(cfg, N)
        result = run(field0, cfg.solver_config(model, N), tensors)
        if not np.all(np.isfinite(result.field.U)):
            return "skipped-unstable", None
        return "ok", result
    except (SolverError, DryStateError):
        return "skipped-unstable", None
    except Exception:
        return "failed", None


def run_comparison(cfg: ScenarioConfig, max_workers: int | None = None) -> ComparisonResult:
    """Run every (model, N) against the same-order SWME reference.

    Independent runs execute concurrently; the table is assembled after the
    join. Unstable runs (the known fate of high-order SWME) are marked.
    """
    orders = sorted(set(cfg.orders))
    models = [ModelKind.parse(m) for m in cfg.models]
    tensors = {N: coefficient_tensors(N) for N in orders}
    jobs = [(ModelKind.SWME, N) for N in orders] + [
        (m, N) for m in models for N in orders if m != ModelKind.SWME
    ]

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {
            (m.value, N): pool.submit(_single_run, cfg, m, N, tensors[N])
            for (m, N) in jobs
        }
        outcome = {key: fut.result() for key, fut in futures.items()}

    run_status = {key: status for key, (status, _) in outcome.items()}
    fields = {key: res.field for key, (status, res) in outcome.items() if status == "ok"}
    results = {key: res for key, (status, res) in outcome.items() if status == "ok"}

    rows: list[ComparisonRow] = []
    for m in models:
        if m == ModelKind.SWME:
            continue
        for N in orders:
            variables = ["h", "u_m"] + [
                f"alpha_{i}" for i in range(1, min(N, ERROR_VARIABLES_MAX) + 1)
            ]
            ref_key = (ModelKind.SWME.value, N)
            key = (m.value, N)
            for var in variables:
                if run_status.get(ref_key) != "ok" or run_status.get(key) != "ok":
                    status = run_status.get(key, "failed")
                    if run_status.get(ref_key) != "ok":
                        status = run_status.get(ref_key, "failed")
                    rows.append(ComparisonRow(m.value, N, var, None, False, status))
                    continue
                ev = relative_error(fields[key], fields[ref_key], var)
                rows.append(ComparisonRow(m.value, N, var, ev.value, ev.absolute, "ok"))
    return ComparisonResult(cfg, rows, run_status, fields, results)


def write_snapshot_csv(field: Field1D, path) -> None:
    """One row per cell: x, h, u_m, alpha_1..alpha_N (primitive variables)."""
    h, u_m, alpha = field.primitive()
    header = "x,h,u_m," + ",".join(f"alpha_{i}" for i in range(1, field.N + 1))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for x, hh, uu, row in zip(field.centers, h, u_m, alpha):
            vals = ",".join(f"{v:.17g}" for v in row)
            fh.write(f"{x:.17g},{hh:.17g},{uu:.17g},{vals}\n")


def write_diagnostics_csv(result: RunResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,mass,momentum,max_imag\n")
        for t, m, p, mi in zip(result.times, result.mass, result.momentum, result.max_imag):
            fh.write(f"{t:.17g},{m:.17g},{p:.17g},{mi:.17g}\n")


def write_manifest(path, cfg: ScenarioConfig, outputs, run_status, wall_time_s: float,
                   started: float, finished: float) -> None:
    manifest = {
        "config_hash": cfg.config_hash(),
        "code_version": __version__,
        "started_unix": started,
        "finished_unix": finished,
        "wall_time_s": wall_time_s,
        "outputs": sorted(str(p) for p in outputs),
        "runs": [
            {"model": m, "N": n, "status": s}
            for (m, n), s in sorted(run_status.items())
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def timed(fn, *args, **kwargs):
    """Run fn and return (result, started, finished)."""
    started = time.time()
    result = fn(*args, **kwargs)
    finished = time.time()
    return result, started, finished
