"""Shifted Legendre basis on [0, 1], Gauss quadrature, and closure tensors.

The vertical velocity profile is expanded in the basis

    phi_i(zeta) = P_i(1 - 2*zeta),    zeta in [0, 1],

where P_i is the standard Legendre polynomial with P_i(1) = 1, so that
phi_i(0) = 1 at the bottom and the basis is orthogonal with

    int_0^1 phi_i phi_j dzeta = delta_ij / (2i + 1).

The moment systems are assembled from the tensors

    A_ijk = (2i+1) int_0^1 phi_i phi_j phi_k dzeta
    B_ijk = (2i+1) int_0^1 phi_i' (int_0^zeta phi_j) phi_k dzeta
    D_ij  = (2i+1) int_0^1 phi_i' phi_j' dzeta

evaluated with a Gauss rule that is exact for the polynomial integrands.
D_ij enters the Newtonian bottom-friction closure only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

MAX_ORDER = 12


def _legendre_values(n_max: int, x: np.ndarray) -> np.ndarray:
    """P_0..P_n_max at x by the three-term recurrence; shape (n_max+1, len(x))."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def _legendre_deriv_values(n_max: int, x: np.ndarray) -> np.ndarray:
    """P'_0..P'_n_max at x via P'_k = P'_{k-2} + (2k-1) P_{k-1} (finite everywhere)."""
    x = np.asarray(x, dtype=float)
    P = _legendre_values(max(n_max - 1, 0), x)
    out = np.zeros((n_max + 1,) + x.shape)
    if n_max >= 1:
        out[1] = 1.0
    for k in range(2, n_max + 1):
        out[k] = out[k - 2] + (2 * k - 1) * P[k - 1]
    return out


def phi(i: int, zeta):
    """Basis function phi_i(zeta) = P_i(1 - 2 zeta); phi_i(0) = 1."""
    if i < 0:
        raise ValueError("basis index must be >= 0")
    zeta = np.asarray(zeta, dtype=float)
    val = _legendre_values(i, 1.0 - 2.0 * zeta)[i]
    return val if val.shape else float(val)


def phi_prime(i: int, zeta):
    """d/dzeta of phi_i; chain rule gives -2 P_i'(1 - 2 zeta)."""
    if i < 0:
        raise ValueError("basis index must be >= 0")
    zeta = np.asarray(zeta, dtype=float)
    val = -2.0 * _legendre_deriv_values(i, 1.0 - 2.0 * zeta)[i]
    return val if val.shape else float(val)


def phi_antideriv(j: int, zeta):
    """int_0^zeta phi_j, exact: (P_{j-1} - P_{j+1})(1-2 zeta) / (2(2j+1)) for j >= 1."""
    zeta = np.asarray(zeta, dtype=float)
    if j == 0:
        return zeta if zeta.shape else float(zeta)
    P = _legendre_values(j + 1, 1.0 - 2.0 * zeta)
    val = (P[j - 1] - P[j + 1]) / (2.0 * (2 * j + 1))
    return val if val.shape else float(val)


@dataclass(frozen=True)
class Quadrature:
    """Gauss-Legendre rule on [0, 1]; exact for polynomials up to `degree`."""

    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def gauss_legendre_01(n_nodes: int) -> Quadrature:
    """n-point Gauss-Legendre rule mapped to [0, 1] (weights sum to 1)."""
    if n_nodes < 1:
        raise ValueError("need at least one node")
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return Quadrature(nodes=(x + 1.0) / 2.0, weights=w / 2.0, degree=2 * n_nodes - 1)


@dataclass(frozen=True)
class CoefficientTensors:
    """Closure tensors for moment order N.

    Arrays use natural 1-based indexing: A[i, j, k] is valid for
    i, j, k in 1..N (index 0 slices are zero). A is symmetric in (j, k).
    G[i, l, j] = B[i, l, j] + 2 A[i, j, l] is the precontracted kernel of the
    lower-right transport block.
    """

    N: int
    A: np.ndarray
    B: np.ndarray
    D: np.ndarray
    G: np.ndarray

    def lowering_kernel(self) -> np.ndarray:
        """View of G restricted to the 1..N block, shape (N, N, N)."""
        return self.G[1:, 1:, 1:]


def coefficient_tensors(N: int) -> CoefficientTensors:
    """Build A_ijk, B_ijk, D_ij for order N with an exact Gauss rule.

    The integrands are polynomials of degree at most 3N + 1, so the
    ceil((3N+2)/2)-point rule integrates them exactly.
    """
    if not 1 <= N <= MAX_ORDER:
        raise ValueError(f"moment order must be in 1..{MAX_ORDER}, got {N}")
    quad = gauss_legendre_01((3 * N + 3) // 2)
    z, w = quad.nodes, quad.weights
    x = 1.0 - 2.0 * z
    P = _legendre_values(N + 1, x)                # phi_i(z) = P[i]
    dP = -2.0 * _legendre_deriv_values(N, x)      # phi_i'(z)
    psi = np.empty((N + 1, z.size))               # int_0^z phi_j
    psi[0] = z
    for j in range(1, N + 1):
        psi[j] = (P[j - 1] - P[j + 1]) / (2.0 * (2 * j + 1))

    scale = 2.0 * np.arange(N + 1) + 1.0
    A = np.zeros((N + 1, N + 1, N + 1))
    B = np.zeros((N + 1, N + 1, N + 1))
    D = np.zeros((N + 1, N + 1))
    Pw = P[: N + 1] * w
    A[1:, 1:, 1:] = scale[1:, None, None] * np.einsum(
        "iq,jq,kq->ijk", Pw[1:], P[1:N + 1], P[1:N + 1]
    )
    B[1:, 1:, 1:] = scale[1:, None, None] * np.einsum(
        "iq,jq,kq->ijk", dP[1:] * w, psi[1:], P[1:N + 1]
    )
    D[1:, 1:] = scale[1:, None] * np.einsum("iq,jq->ij", dP[1:] * w, dP[1:])

    G = np.zeros_like(A)
    G[1:, 1:, 1:] = B[1:, 1:, 1:] + 2.0 * np.swapaxes(A[1:, 1:, 1:], 1, 2)
    return CoefficientTensors(N=N, A=A, B=B, D=D, G=G)


def project_profile(u, N: int, n_nodes: int = 64):
    """Project a velocity profile u(zeta) onto the basis.

    Returns (u_m, alpha) with u_m = int_0^1 u dzeta and
    alpha_i = (2i+1) int_0^1 u phi_i dzeta, i = 1..N.

    Exact for polynomial u of degree <= 2*n_nodes - 1 - N; a warning is
    emitted when refining the rule still moves the coefficients.
    """
    if not 1 <= N <= MAX_ORDER:
        raise ValueError(f"moment order must be in 1..{MAX_ORDER}, got {N}")

    def moments(nn):
        quad = gauss_legendre_01(nn)
        uv = np.asarray([u(z) for z in quad.nodes], dtype=float)
        P = _legendre_values(N, 1.0 - 2.0 * quad.nodes)
        u_m = quad.integrate(uv)
        alpha = np.array(
            [(2 * i + 1) * quad.integrate(uv * P[i]) for i in range(1, N + 1)]
        )
        return u_m, alpha

    u_m, alpha = moments(n_nodes)
    u_m2, alpha2 = moments(n_nodes + 8)
    drift = max(abs(u_m - u_m2), float(np.max(np.abs(alpha - alpha2), initial=0.0)))
    if drift > 1e-10:
        warnings.warn(
            f"profile projection not converged at {n_nodes} nodes "
            f"(drift {drift:.2e}); profile may exceed the quadrature degree",
            stacklevel=2,
        )
    return u_m2, alpha2
