"""Quasilinear system matrices for the six shallow water moment models.

All six models share the mass equation; they differ in how the momentum row
and the N moment rows are closed:

  SWME     full nonlinear closure (reference model)
  HSWME    SWME matrix evaluated at alpha_i = 0, i >= 2 (all rows)
  SWLME    moment rows linearized in alpha; mass/momentum rows untouched
  MHSWME   moment rows from HSWME; mass/momentum rows from SWME
  PHSWME   regularization at alpha_i = 0, i >= 2, applied to the matrix in
           primitive variables (all rows)
  PMHSWME  primitive regularization applied to the moment rows only

Regularized matrices are assembled from their closed-form entries (first two
columns plus the tridiagonal alpha_1 band), never by substituting a modified
state into the SWME builder; the substitution route is kept as a cross-check
in the tests. Batched builders produce one matrix per row of a state array
and are the kernels the finite-volume solver runs on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .basis import CoefficientTensors
from .state import DEFAULT_H_MIN, DryStateError, PrimitiveState


class ModelKind(enum.Enum):
    SWME = "swme"
    HSWME = "hswme"
    SWLME = "swlme"
    MHSWME = "mhswme"
    PHSWME = "phswme"
    PMHSWME = "pmhswme"

    @classmethod
    def parse(cls, name: str) -> "ModelKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model '{name}'; valid models: {valid}") from None

    @property
    def globally_hyperbolic(self) -> str:
        """'yes', 'no', or 'local' (real spectrum only on part of state space)."""
        return _PROPERTIES[self][0]

    @property
    def unchanged_momentum(self) -> bool:
        return _PROPERTIES[self][1]

    @property
    def analytic_steady_states(self) -> bool:
        return _PROPERTIES[self][2]

    @property
    def nonlinear_moment_equations(self) -> bool:
        return _PROPERTIES[self][3]


# globally_hyperbolic, unchanged_momentum, analytic_steady_states, nonlinear_moment_eqns
_PROPERTIES = {
    ModelKind.SWME: ("no", True, False, True),
    ModelKind.HSWME: ("yes", False, False, True),
    ModelKind.SWLME: ("yes", True, True, False),
    ModelKind.MHSWME: ("local", True, False, True),
    ModelKind.PHSWME: ("yes", False, True, True),
    ModelKind.PMHSWME: ("yes", True, True, True),
}

VARIABLE_SETS = ("primitive", "convective")


@dataclass(frozen=True)
class SystemMatrix:
    entries: np.ndarray
    variable_set: str
    model: ModelKind
    N: int

    def __post_init__(self):
        n = self.N + 2
        if self.entries.shape != (n, n):
            raise ValueError(f"expected {(n, n)} matrix, got {self.entries.shape}")


def band_coefficients(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Sub/superdiagonal factors of the alpha_1 band: a_i=(i-1)/(2i-1), c_i=(i+1)/(2i+1), i=2..N."""
    i = np.arange(2, N + 1, dtype=float)
    return (i - 1) / (2 * i - 1), (i + 1) / (2 * i + 1)


def lowering_block(alpha: np.ndarray, u_m: float, tensors: CoefficientTensors) -> np.ndarray:
    """Transport block of the moment rows: B_ilj + 2 A_ijl contracted with alpha, plus u_m I."""
    alpha = np.asarray(alpha, dtype=float)
    N = tensors.N
    blk = np.einsum("ilj,j->il", tensors.lowering_kernel(), alpha)
    return blk + u_m * np.eye(N)


def _alpha1_band(alpha1: float, u_m: float, N: int) -> np.ndarray:
    """lowering_block evaluated at alpha = (alpha_1, 0, ..., 0), in closed form."""
    blk = u_m * np.eye(N)
    if N >= 2:
        a, c = band_coefficients(N)
        idx = np.arange(1, N)
        blk[idx, idx - 1] = a * alpha1
        blk[idx - 1, idx] = c * alpha1
    return blk


def build_system_matrix(
    model: ModelKind,
    variable_set: str,
    U_p: PrimitiveState,
    tensors: CoefficientTensors,
    g: float = 1.0,
) -> SystemMatrix:
    """Assemble the (N+2)x(N+2) transport matrix of `model` at state U_p.

    The convective row 1 is always (0, 1, 0, ...); the primitive row 1 is
    always (u_m, h, 0, ...). Dry states are rejected.
    """
    if variable_set not in VARIABLE_SETS:
        raise ValueError(f"variable_set must be one of {VARIABLE_SETS}")
    N = U_p.N
    if N < 1:
        raise ValueError("moment order must be at least 1")
    if N != tensors.N:
        raise ValueError(f"tensors built for N={tensors.N}, state has N={N}")
    if U_p.h <= DEFAULT_H_MIN:
        raise DryStateError(f"h={U_p.h} too small for matrix assembly")

    h, u_m, al = U_p.h, U_p.u_m, U_p.alpha
    a1 = al[0]
    n = N + 2
    M = np.zeros((n, n))
    conv = variable_set == "convective"
    i_arr = np.arange(1, N + 1, dtype=float)
    inv_odd = 1.0 / (2.0 * i_arr + 1.0)

    # mass row
    if conv:
        M[0, 1] = 1.0
    else:
        M[0, 0] = u_m
        M[0, 1] = h

    # momentum row
    if model in (ModelKind.HSWME, ModelKind.PHSWME):
        mom_sum = a1 * a1 / 3.0
        mom_cols = np.zeros(N)
        mom_cols[0] = 2.0 * a1 / 3.0
    else:
        mom_sum = float(np.dot(al * al, inv_odd))
        mom_cols = 2.0 * al * inv_odd
    if conv:
        M[1, 0] = -u_m * u_m + g * h - mom_sum
        M[1, 1] = 2.0 * u_m
    else:
        M[1, 0] = g + mom_sum / h
        M[1, 1] = u_m
    M[1, 2:] = mom_cols

    # moment rows
    if model == ModelKind.SWME:
        Aq = np.einsum("ijk,j,k->i", tensors.A[1:, 1:, 1:], al, al)
        M[2:, 2:] = lowering_block(al, u_m, tensors)
        if conv:
            M[2:, 0] = -2.0 * u_m * al - Aq
            M[2:, 1] = 2.0 * al
        else:
            ABq = np.einsum("ijk,j,k->i", (tensors.A + tensors.B)[1:, 1:, 1:], al, al)
            M[2:, 0] = ABq / h
            M[2:, 1] = al
    elif model == ModelKind.SWLME:
        np.fill_diagonal(M[2:, 2:], u_m)
        if conv:
            M[2:, 0] = -2.0 * u_m * al
            M[2:, 1] = 2.0 * al
        else:
            M[2:, 1] = al
    elif model in (ModelKind.HSWME, ModelKind.MHSWME):
        M[2:, 2:] = _alpha1_band(a1, u_m, N)
        if conv:
            M[2, 0] = -2.0 * u_m * a1
            M[2, 1] = 2.0 * a1
            if N >= 2:
                M[3, 0] = -2.0 * a1 * a1 / 3.0
        else:
            # exact transformation of the convective closed form
            M[2, 1] = a1
            M[3:, 1] = -al[1:]
            a, c = band_coefficients(N)
            if N >= 2:
                M[2, 0] = c[0] * a1 * al[1] / h
                M[3, 0] = (-a1 * a1 / 3.0 + (c[1] * a1 * al[2] if N >= 3 else 0.0)) / h
            for i in range(3, N + 1):
                up = c[i - 1] * a1 * al[i] if i < N else 0.0
                M[1 + i, 0] = (a[i - 2] * a1 * al[i - 2] + up) / h
    elif model in (ModelKind.PHSWME, ModelKind.PMHSWME):
        M[2:, 2:] = _alpha1_band(a1, u_m, N)
        if conv:
            M[2:, 1] = al.copy()
            M[2, 1] += a1
            a, c = band_coefficients(N)
            col = -u_m * al
            col[0] -= u_m * a1
            if N >= 2:
                col[1] -= a1 * a1 / 3.0
                col[1:] -= a * a1 * al[:-1]
                col[:-1] -= c * a1 * al[1:]
            M[2:, 0] = col
        else:
            M[2, 1] = a1
            if N >= 2:
                M[3, 0] = -a1 * a1 / (3.0 * h)
    else:
        raise ValueError(f"unhandled model {model}")

    return SystemMatrix(entries=M, variable_set=variable_set, model=model, N=N)


def convective_matrices_batch(
    model: ModelKind,
    U: np.ndarray,
    tensors: CoefficientTensors,
    g: float = 1.0,
) -> np.ndarray:
    """Convective system matrices for a batch of states.

    U has shape (M, N+2) holding (h, h u_m, h alpha_i) per row; the result has
    shape (M, N+2, N+2). Same entries as build_system_matrix, vectorized.
    """
    U = np.asarray(U, dtype=float)
    m, n = U.shape
    N = n - 2
    if N != tensors.N:
        raise ValueError(f"tensors built for N={tensors.N}, states have N={N}")
    h = U[:, 0]
    if np.any(h <= DEFAULT_H_MIN):
        raise DryStateError("dry state in batch")
    u_m = U[:, 1] / h
    al = U[:, 2:] / h[:, None]
    a1 = al[:, 0]
    i_arr = np.arange(1, N + 1, dtype=float)
    inv_odd = 1.0 / (2.0 * i_arr + 1.0)

    A = np.zeros((m, n, n))
    A[:, 0, 1] = 1.0

    if model in (ModelKind.HSWME, ModelKind.PHSWME):
        mom_sum = a1 * a1 / 3.0
        A[:, 1, 2] = 2.0 * a1 / 3.0
    else:
        mom_sum = np.einsum("mj,j->m", al * al, inv_odd)
        A[:, 1, 2:] = 2.0 * al * inv_odd
    A[:, 1, 0] = -u_m * u_m + g * h - mom_sum
    A[:, 1, 1] = 2.0 * u_m

    diag = np.arange(2, n)
    if model == ModelKind.SWME:
        Aq = np.einsum("ijk,mj,mk->mi", tensors.A[1:, 1:, 1:], al, al)
        A[:, 2:, 0] = -2.0 * u_m[:, None] * al - Aq
        A[:, 2:, 1] = 2.0 * al
        A[:, 2:, 2:] = np.einsum("ilj,mj->mil", tensors.lowering_kernel(), al)
        A[:, diag, diag] += u_m[:, None]
    elif model == ModelKind.SWLME:
        A[:, 2:, 0] = -2.0 * u_m[:, None] * al
        A[:, 2:, 1] = 2.0 * al
        A[:, diag, diag] = u_m[:, None]
    else:
        # shared alpha_1 band of the regularized models
        A[:, diag, diag] = u_m[:, None]
        if N >= 2:
            a, c = band_coefficients(N)
            sub = np.arange(3, n)
            A[:, sub, sub - 1] = a * a1[:, None]
            A[:, sub - 1, sub] = c * a1[:, None]
        if model in (ModelKind.HSWME, ModelKind.MHSWME):
            A[:, 2, 0] = -2.0 * u_m * a1
            A[:, 2, 1] = 2.0 * a1
            if N >= 2:
                A[:, 3, 0] = -2.0 * a1 * a1 / 3.0
        else:  # PHSWME, PMHSWME
            A[:, 2:, 1] = al
            A[:, 2, 1] += a1
            col = -u_m[:, None] * al
            col[:, 0] -= u_m * a1
            if N >= 2:
                col[:, 1] -= a1 * a1 / 3.0
                col[:, 1:] -= a * (a1[:, None] * al[:, :-1])
                col[:, :-1] -= c * (a1[:, None] * al[:, 1:])
            A[:, 2:, 0] = col
    return A
