"""First-order path-consistent finite-volume solver with bottom friction.

The nonconservative systems U_t + A_c(U) U_x = 0 are discretized with a
path-conservative local Lax-Friedrichs (Rusanov) splitting along the
straight-line path: at each interface

    D_pm = 1/2 (A(Ubar) +- s I) (U_R - U_L),
    Ubar = (U_L + U_R)/2,
    s = max spectral radius of A at U_L, U_R, Ubar,

so D_minus + D_plus = A(Ubar) (U_R - U_L) holds to machine precision and the
conservative rows telescope exactly. Cells update explicitly,

    U_i <- U_i - dt/dx (D_plus_{i-1/2} + D_minus_{i+1/2}) + dt * friction(U_i),

with zeroth-order extrapolation (outflow) or wraparound (periodic) ghosts.

The Newtonian bottom-slip friction uses the bottom velocity
u(0) = u_m + sum_j alpha_j (all basis functions equal 1 at the bottom):

    momentum row:    -(nu/lambda) (u_m + sum_j alpha_j)
    moment row i:    -(2i+1)(nu/lambda)(u_m + sum_j alpha_j)
                     - (nu/h) sum_j D_ij alpha_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .basis import CoefficientTensors, coefficient_tensors
from .models import ModelKind, convective_matrices_batch
from .spectral import legendre_deriv_roots, outer_radicand
from .state import DEFAULT_H_MIN, ConvectiveState, DryStateError, PrimitiveState

BOUNDARIES = ("outflow", "periodic")


class SolverError(RuntimeError):
    """Time stepping produced an unusable (dry or non-finite) cell."""


@dataclass(frozen=True)
class Friction:
    nu: float
    lambda_slip: float

    def __post_init__(self):
        if self.nu <= 0 or self.lambda_slip <= 0:
            raise ValueError("viscosity and slip length must be positive")


@dataclass(frozen=True)
class SolverConfig:
    model: ModelKind
    N: int
    t_end: float
    g: float = 1.0
    dt_mode: str = "cfl"  # "cfl" or "fixed"
    cfl_number: float = 0.5
    dt: float | None = None
    friction: Friction | None = None
    h_min: float = DEFAULT_H_MIN

    def __post_init__(self):
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.dt_mode not in ("cfl", "fixed"):
            raise ValueError("dt_mode must be 'cfl' or 'fixed'")
        if self.dt_mode == "cfl" and not 0.0 < self.cfl_number <= 1.0:
            raise ValueError("CFL number must lie in (0, 1]")
        if self.dt_mode == "fixed" and (self.dt is None or self.dt <= 0):
            raise ValueError("fixed dt_mode requires a positive dt")


@dataclass(frozen=True)
class Field1D:
    """Cell-averaged convective states on a uniform grid."""

    x_min: float
    x_max: float
    U: np.ndarray  # (n_cells, N+2): h, h u_m, h alpha_1..h alpha_N
    boundary: str = "outflow"

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        if self.x_max <= self.x_min:
            raise ValueError("empty domain")
        object.__setattr__(self, "U", np.asarray(self.U, dtype=float))
        if self.U.ndim != 2 or self.U.shape[1] < 3:
            raise ValueError("U must be (n_cells, N+2) with N >= 1")

    @property
    def n_cells(self) -> int:
        return self.U.shape[0]

    @property
    def N(self) -> int:
        return self.U.shape[1] - 2

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    def primitive(self):
        h = self.U[:, 0]
        if np.any(h <= DEFAULT_H_MIN):
            raise DryStateError("field contains dry cells")
        return h, self.U[:, 1] / h, self.U[:, 2:] / h[:, None]

    @classmethod
    def from_primitive(cls, x_min, x_max, h, u_m, alpha, boundary="outflow"):
        h = np.asarray(h, dtype=float)
        u_m = np.asarray(u_m, dtype=float)
        alpha = np.atleast_2d(np.asarray(alpha, dtype=float))
        U = np.column_stack([h, h * u_m, h[:, None] * alpha])
        return cls(x_min=x_min, x_max=x_max, U=U, boundary=boundary)


def wave_speeds(model: ModelKind, U: np.ndarray, tensors: CoefficientTensors, g: float):
    """Spectral radius of A_c per state plus the largest |Im lambda| seen.

    Closed forms cover every model except SWME for N >= 2, which falls back
    to the batched dense eigensolver (SWME at N = 1 coincides with HSWME, so
    its closed form applies there).
    """
    U = np.asarray(U, dtype=float)
    N = U.shape[1] - 2
    h = U[:, 0]
    u_m = U[:, 1] / h
    al = U[:, 2:] / h[:, None]
    abs_um = np.abs(u_m)

    if model == ModelKind.SWME and N >= 2:
        ev = np.linalg.eigvals(convective_matrices_batch(model, U, tensors, g))
        return np.max(np.abs(ev), axis=1), float(np.max(np.abs(ev.imag)))

    weights = 1.0 / (2.0 * np.arange(1, N + 1) + 1.0)
    gh = g * h
    a1sq = al[:, 0] ** 2
    if model in (ModelKind.HSWME, ModelKind.PHSWME) or (model == ModelKind.SWME and N == 1):
        rad = gh + a1sq
    elif model == ModelKind.MHSWME:
        rad = gh + a1sq - (al[:, 1:] ** 2) @ weights[1:]
    elif model == ModelKind.PMHSWME:
        rad = gh + a1sq + (al[:, 1:] ** 2) @ weights[1:]
    elif model == ModelKind.SWLME:
        rad = gh + 3.0 * (al**2 @ weights)
    else:  # pragma: no cover
        raise ValueError(f"unhandled model {model}")

    outer = np.where(rad >= 0.0, abs_um + np.sqrt(np.maximum(rad, 0.0)),
                     np.sqrt(u_m**2 - np.minimum(rad, 0.0)))
    if model == ModelKind.SWLME or N == 1:
        interior = abs_um
    else:
        r_max = float(legendre_deriv_roots(N + 1)[-1])
        interior = abs_um + np.abs(al[:, 0]) * r_max
    max_imag = float(np.sqrt(np.max(np.maximum(-rad, 0.0))))
    return np.maximum(outer, interior), max_imag


def _fluctuations(UL, UR, model, tensors, g):
    """Rusanov path fluctuations for a batch of interfaces."""
    Ubar = 0.5 * (UL + UR)
    A = convective_matrices_batch(model, Ubar, tensors, g)
    sL, iL = wave_speeds(model, UL, tensors, g)
    sR, iR = wave_speeds(model, UR, tensors, g)
    sM, iM = wave_speeds(model, Ubar, tensors, g)
    s = np.maximum(np.maximum(sL, sR), sM)
    dU = UR - UL
    AdU = np.einsum("mij,mj->mi", A, dU)
    sdU = s[:, None] * dU
    return 0.5 * (AdU - sdU), 0.5 * (AdU + sdU), max(iL, iR, iM)


def path_fluctuations(U_L: ConvectiveState, U_R: ConvectiveState, model: ModelKind,
                      tensors: CoefficientTensors, g: float = 1.0):
    """Fluctuation pair (D_minus, D_plus) across one interface.

    Consistency D_minus + D_plus = A(Ubar) (U_R - U_L) holds by construction.
    """
    if U_L.h <= DEFAULT_H_MIN or U_R.h <= DEFAULT_H_MIN:
        raise DryStateError("fluctuations need wet states on both sides")
    UL = U_L.as_array()[None, :]
    UR = U_R.as_array()[None, :]
    Dm, Dp, _ = _fluctuations(UL, UR, model, tensors, g)
    return Dm[0], Dp[0]


def _friction_batch(h, u_m, al, nu, lam, tensors: CoefficientTensors):
    N = al.shape[1]
    ub = u_m + al.sum(axis=1)  # bottom velocity: phi_i(0) = 1
    S = np.zeros((h.size, N + 2))
    S[:, 1] = -(nu / lam) * ub
    scale = 2.0 * np.arange(1, N + 1) + 1.0
    S[:, 2:] = -scale * (nu / lam) * ub[:, None] - (nu / h[:, None]) * (
        al @ tensors.D[1:, 1:].T
    )
    return S


def friction_source(U_p: PrimitiveState, nu: float, lambda_slip: float,
                    tensors: CoefficientTensors) -> np.ndarray:
    """Newtonian bottom-slip friction source for one wet state (length N+2)."""
    if U_p.h <= DEFAULT_H_MIN:
        raise DryStateError("friction needs a wet state")
    return _friction_batch(
        np.array([U_p.h]), np.array([U_p.u_m]), U_p.alpha[None, :], nu, lambda_slip, tensors
    )[0]


def _padded(field: Field1D) -> np.ndarray:
    if field.boundary == "periodic":
        return np.vstack([field.U[-1:], field.U, field.U[:1]])
    return np.vstack([field.U[:1], field.U, field.U[-1:]])


def step(field: Field1D, config: SolverConfig, dt: float,
         tensors: CoefficientTensors | None = None, t: float = 0.0):
    """One explicit Euler update; returns (field, max |Im lambda| encountered)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if tensors is None:
        tensors = coefficient_tensors(field.N)
    Up = _padded(field)
    Dm, Dp, max_imag = _fluctuations(Up[:-1], Up[1:], config.model, tensors, config.g)
    Unew = field.U - (dt / field.dx) * (Dp[:-1] + Dm[1:])
    if config.friction is not None:
        h, u_m, al = field.primitive()
        Unew = Unew + dt * _friction_batch(
            h, u_m, al, config.friction.nu, config.friction.lambda_slip, tensors
        )
    bad = ~np.all(np.isfinite(Unew), axis=1) | (Unew[:, 0] <= config.h_min)
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise SolverError(
            f"dry or non-finite cell {idx} (x={field.centers[idx]:.6g}) at t={t:.6g}"
        )
    return replace(field, U=Unew), max_imag


@dataclass(frozen=True)
class RunResult:
    field: Field1D
    times: np.ndarray
    mass: np.ndarray
    momentum: np.ndarray
    max_imag: np.ndarray
    n_steps: int

    @property
    def hyperbolicity_warnings(self) -> int:
        """Steps on which the transport operator had a complex spectrum."""
        return int(np.sum(self.max_imag > 1e-9))


def run(field: Field1D, config: SolverConfig,
        tensors: CoefficientTensors | None = None) -> RunResult:
    """Advance to t_end exactly (last step clipped), recording diagnostics."""
    if tensors is None:
        tensors = coefficient_tensors(field.N)
    t = 0.0
    times, mass, momentum, imags = [], [], [], []
    n_steps = 0
    while t < config.t_end * (1.0 - 1e-14):
        if config.dt_mode == "fixed":
            dt = config.dt
        else:
            speeds, _ = wave_speeds(config.model, field.U, tensors, config.g)
            smax = float(np.max(speeds))
            if smax <= 0.0:
                dt = config.t_end - t
            else:
                dt = config.cfl_number * field.dx / smax
        dt = min(dt, config.t_end - t)
        field, mi = step(field, config, dt, tensors, t)
        t += dt
        n_steps += 1
        times.append(t)
        mass.append(float(np.sum(field.U[:, 0]) * field.dx))
        momentum.append(float(np.sum(field.U[:, 1]) * field.dx))
        imags.append(mi)
    return RunResult(
        field=field,
        times=np.asarray(times),
        mass=np.asarray(mass),
        momentum=np.asarray(momentum),
        max_imag=np.asarray(imags),
        n_steps=n_steps,
    )
