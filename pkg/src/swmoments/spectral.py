"""Closed-form and numerical spectra, hyperbolicity verdicts, region scans.

For every regularized model the characteristic polynomial factors into the
polynomial of the tridiagonal alpha_1 block times a quadratic:

    chi(lam) = chi_block(lam - u_m) * ((lam - u_m)^2 - radicand)

with chi_block(mu) = (-alpha_1)^N N!/(2N+1)!! * L'_{N+1}(mu/alpha_1) where
L'_{N+1} is the derivative of the (N+1)-degree Legendre polynomial. The
block contributes interior eigenvalues u_m + alpha_1 r_i at the roots r_i of
L'_{N+1}; the quadratic contributes the outer pair u_m +- sqrt(radicand).
Everything is evaluated in a division-free form so alpha_1 -> 0 is regular.

A state is classified hyperbolic when the spectrum is real (up to rounding
noise scaled by the spectral radius) and the eigenvector matrix is well
conditioned; boundary cells where only one of the two tests fails marginally
are reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .basis import CoefficientTensors
from .models import ModelKind, SystemMatrix, build_system_matrix, convective_matrices_batch
from .state import PrimitiveState

MAX_DERIV_DEGREE = 13
HYP_TOL = 1e-9
MARGINAL_FACTOR = 1e3
COND_LIMIT = 1e8


class SpectralError(RuntimeError):
    """Dense eigenvalue iteration failed to converge."""


def double_factorial(n: int) -> int:
    """n!! for odd n >= -1, as an exact integer."""
    if n < -1 or n % 2 == 0:
        raise ValueError("double factorial used here only for odd n >= -1")
    out = 1
    for k in range(n, 0, -2):
        out *= k
    return out


def legendre_deriv_roots(n: int) -> np.ndarray:
    """The n-1 roots of L'_n on (-1, 1), increasing and symmetric about 0.

    L'_n is proportional to the Jacobi polynomial P^(1,1)_{n-1}, whose roots
    are the eigenvalues of a symmetric tridiagonal Jacobi matrix with zero
    diagonal and off-diagonal sqrt(k(k+2)/((2k+1)(2k+3))).
    """
    if not 2 <= n <= MAX_DERIV_DEGREE:
        raise ValueError(f"degree must be in 2..{MAX_DERIV_DEGREE}, got {n}")
    m = n - 1
    if m == 1:
        return np.zeros(1)
    k = np.arange(1, m, dtype=float)
    off = np.sqrt(k * (k + 2) / ((2 * k + 1) * (2 * k + 3)))
    roots = eigvalsh_tridiagonal(np.zeros(m), off)
    roots = 0.5 * (roots - roots[::-1])  # enforce exact symmetry about 0
    return np.sort(roots)


@lru_cache(maxsize=None)
def _legendre_deriv_monomial_coeffs(n: int) -> np.ndarray:
    """Monomial coefficients (ascending) of L'_n; only parity-(n-1) entries are nonzero."""
    c = np.zeros(n + 1)
    c[n] = 1.0
    return np.polynomial.legendre.leg2poly(np.polynomial.legendre.legder(c))


def block_char_poly(N: int, mu, alpha1) -> np.ndarray:
    """det of the alpha_1 band block minus mu*I, division-free in alpha_1.

    Equals (-alpha1)^N N!/(2N+1)!! L'_{N+1}(mu/alpha1), expanded as a
    polynomial in (mu, alpha1^2) so alpha1 = 0 evaluates to (-mu)^N.
    """
    mu = np.asarray(mu, dtype=float)
    alpha1 = np.asarray(alpha1, dtype=float)
    coeffs = _legendre_deriv_monomial_coeffs(N + 1)
    acc = np.zeros(np.broadcast(mu, alpha1).shape)
    for j in range(N, -1, -1):
        if coeffs[j] != 0.0:
            acc = acc + coeffs[j] * mu**j * alpha1 ** (N - j)
    val = (-1.0) ** N * math.factorial(N) / double_factorial(2 * N + 1) * acc
    return val if val.shape else float(val)


def outer_radicand(model: ModelKind, U_p: PrimitiveState, g: float) -> float:
    """Argument of the square root in the outer eigenvalue pair.

    Negative values (possible only for MHSWME) signal a complex pair.
    """
    al = U_p.alpha
    N = U_p.N
    gh = g * U_p.h
    weights = 1.0 / (2.0 * np.arange(1, N + 1) + 1.0)
    if model in (ModelKind.HSWME, ModelKind.PHSWME):
        return gh + al[0] ** 2
    if model == ModelKind.MHSWME:
        return gh + al[0] ** 2 - float(np.dot(al[1:] ** 2, weights[1:]))
    if model == ModelKind.PMHSWME:
        return gh + al[0] ** 2 + float(np.dot(al[1:] ** 2, weights[1:]))
    if model == ModelKind.SWLME:
        return gh + 3.0 * float(np.dot(al**2, weights))
    raise ValueError(f"no closed-form spectrum for {model}")


def analytic_eigenvalues(model: ModelKind, U_p: PrimitiveState, g: float = 1.0):
    """Closed-form spectrum, or None for SWME (no closed form exists).

    Interior eigenvalues are u_m + alpha_1 r_i (r_i roots of L'_{N+1}) for
    the band models and an N-fold u_m for SWLME; the outer pair is
    u_m +- sqrt(radicand) and is returned complex when the radicand is
    negative, which is the non-hyperbolic regime of MHSWME.
    """
    if model == ModelKind.SWME:
        return None
    N = U_p.N
    u_m = U_p.u_m
    if model == ModelKind.SWLME:
        interior = np.full(N, u_m, dtype=complex)
    else:
        interior = u_m + U_p.alpha[0] * legendre_deriv_roots(N + 1).astype(complex)
    rad = outer_radicand(model, U_p, g)
    root = np.sqrt(complex(rad))
    ev = np.concatenate((interior, [u_m - root, u_m + root]))
    ev = _sort_spectrum(ev)
    return ev.real if np.all(ev.imag == 0.0) else ev


def char_poly_eval(model: ModelKind, lam: float, U_p: PrimitiveState, g: float = 1.0) -> float:
    """Closed-form characteristic polynomial det(A - lam I) of the model matrix.

    Unavailable for SWME. The alpha_1 -> 0 limit is built into the
    division-free block evaluation.
    """
    if model == ModelKind.SWME:
        raise ValueError("SWME has no closed-form characteristic polynomial")
    N = U_p.N
    mu = lam - U_p.u_m
    quad = mu * mu - outer_radicand(model, U_p, g)
    if model == ModelKind.SWLME:
        return float((-mu) ** N * quad)
    return float(block_char_poly(N, mu, U_p.alpha[0]) * quad)


def _sort_spectrum(ev: np.ndarray) -> np.ndarray:
    order = np.lexsort((ev.imag, ev.real))
    return ev[order]


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    hyperbolic: bool
    max_imag: float
    eigvec_cond: float
    analytic_available: bool
    analytic_mismatch: float | None


def _classify(max_imag: float, scale: float, cond: float, tol: float) -> int:
    """0 = non-hyperbolic, 1 = hyperbolic, 2 = marginal (rounding-boundary cell)."""
    strict = max_imag <= tol * (1.0 + scale)
    near = max_imag <= MARGINAL_FACTOR * tol * (1.0 + scale)
    well_conditioned = cond <= COND_LIMIT
    if strict and well_conditioned:
        return 1
    if near:
        return 2
    return 0


def numeric_spectrum(A, tol: float = HYP_TOL, analytic=None) -> SpectralReport:
    """Dense spectrum of a system matrix with a hyperbolicity verdict.

    Uses the LAPACK Hessenberg-plus-shifted-QR eigensolver. The verdict
    requires a real spectrum within tol*(1 + spectral radius) and an
    eigenvector matrix condition number below 1e8 (diagonalizability proxy).
    """
    M = A.entries if isinstance(A, SystemMatrix) else np.asarray(A, dtype=float)
    if not np.all(np.isfinite(M)):
        raise ValueError("system matrix has non-finite entries")
    try:
        ev, V = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SpectralError(f"eigenvalue iteration failed: {exc}") from exc
    ev = _sort_spectrum(ev)
    max_imag = float(np.max(np.abs(ev.imag)))
    scale = float(np.max(np.abs(ev)))
    cond = float(np.linalg.cond(V))
    verdict = _classify(max_imag, scale, cond, tol)
    mismatch = None
    if analytic is not None:
        ana = _sort_spectrum(np.asarray(analytic, dtype=complex))
        mismatch = float(np.max(np.abs(ana - ev)))
    return SpectralReport(
        eigenvalues=ev,
        hyperbolic=verdict == 1,
        max_imag=max_imag,
        eigvec_cond=cond,
        analytic_available=analytic is not None,
        analytic_mismatch=mismatch,
    )


def spectral_report(
    model: ModelKind,
    U_p: PrimitiveState,
    tensors: CoefficientTensors,
    g: float = 1.0,
    variable_set: str = "convective",
    tol: float = HYP_TOL,
) -> SpectralReport:
    """Build the model matrix at U_p and report its spectrum vs the closed form."""
    A = build_system_matrix(model, variable_set, U_p, tensors, g)
    return numeric_spectrum(A, tol=tol, analytic=analytic_eigenvalues(model, U_p, g))


@dataclass(frozen=True)
class RegionScan:
    """Hyperbolicity raster over scaled coordinates a_i = alpha_i / sqrt(g h)."""

    model: ModelKind
    N: int
    axes: list[np.ndarray]
    verdicts: np.ndarray  # shape (len(axes[0]), ..., len(axes[-1])), values 0/1/2

    def fraction_hyperbolic(self) -> float:
        return float(np.mean(self.verdicts == 1))

    def write_csv(self, path) -> None:
        k = len(self.axes)
        header = ",".join(f"a_{i+1}" for i in range(k)) + ",hyperbolic"
        grids = np.meshgrid(*self.axes, indexing="ij")
        cols = [grid.ravel() for grid in grids]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(header + "\n")
            flat = self.verdicts.ravel()
            for row in range(flat.size):
                coords = ",".join(f"{c[row]:.17g}" for c in cols)
                fh.write(f"{coords},{int(flat[row])}\n")


def scan_hyperbolicity_region(
    model: ModelKind,
    N: int,
    ranges,
    resolution,
    tensors: CoefficientTensors,
    g: float = 1.0,
    tol: float = HYP_TOL,
    chunk: int = 16384,
) -> RegionScan:
    """Classify hyperbolicity on a grid of scaled moment coordinates.

    `ranges` is a sequence of (lo, hi) per scanned axis a_1..a_k (k <= N;
    remaining moments are zero) and `resolution` the point count per axis.
    States are (h=1, u_m=0, alpha_i = a_i sqrt(g)) so the raster depends on
    the scaled coordinates only. The scan is embarrassingly parallel over
    grid points and is evaluated in vectorized chunks.
    """
    ranges = list(ranges)
    k = len(ranges)
    if not 1 <= k <= N:
        raise ValueError("number of scanned axes must be between 1 and N")
    res = [resolution] * k if np.isscalar(resolution) else list(resolution)
    axes = [np.linspace(lo, hi, r) for (lo, hi), r in zip(ranges, res)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([grid.ravel() for grid in grids], axis=1)
    m = pts.shape[0]

    sqrt_gh = np.sqrt(g)  # h = 1
    U = np.zeros((m, N + 2))
    U[:, 0] = 1.0
    U[:, 2 : 2 + k] = pts * sqrt_gh  # convective h*alpha with h = 1

    verdicts = np.empty(m, dtype=np.int8)
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        A = convective_matrices_batch(model, U[lo:hi], tensors, g)
        ev, V = np.linalg.eig(A)
        max_imag = np.max(np.abs(ev.imag), axis=1)
        scale = np.max(np.abs(ev), axis=1)
        conds = np.linalg.cond(V)
        strict = max_imag <= tol * (1.0 + scale)
        near = max_imag <= MARGINAL_FACTOR * tol * (1.0 + scale)
        good = conds <= COND_LIMIT
        out = np.zeros(hi - lo, dtype=np.int8)
        out[near] = 2
        out[strict & good] = 1
        verdicts[lo:hi] = out
    return RegionScan(model=model, N=N, axes=axes, verdicts=verdicts.reshape([len(a) for a in axes]))
