"""Analytical steady states: invariants, conjugate depths, smooth profiles.

SWLME, PHSWME and PMHSWME admit steady states characterized by constant

    h u_m,   E,   alpha_1 / h,   alpha_i (i >= 2),

where the generalized energy per unit width is

    E = 1/2 g h^2 + h u_m^2 + h alpha_1^2 / 3                (PHSWME)
    E = 1/2 g h^2 + h u_m^2 + sum_i h alpha_i^2 / (2i+1)     (SWLME, PMHSWME)

(each term scales like depth * velocity^2, so the alpha contributions carry
the factor h). Eliminating the invariants across two depth levels h_0 and
h = x h_0 yields the conjugate-depth relation

    -Fr^2 + (x^2 + x)/2 + S Fr^2 (x^3 + x^2 + x) = 0,

with S = Ma_1^2/3 for PHSWME and S = sum_i Ma_i^2/(2i+1) for SWLME and
PMHSWME; Ma = 0 recovers the classical hydraulic-jump formula
x = (-1 + sqrt(1 + 8 Fr^2))/2. The trivial branch h = h_0 always exists and
is reported separately from the nontrivial roots.

Smooth (non-constant) steady profiles exist along curves where the system
matrix is singular; for odd N the zero interior characteristic speed gives a
u_m = 0 family that `smooth_steady_profile` integrates to machine precision.
It is the manufactured solution used to verify the quasilinear residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .models import ModelKind

STEADY_MODELS = (ModelKind.SWLME, ModelKind.PHSWME, ModelKind.PMHSWME)


@dataclass(frozen=True)
class ReferenceState:
    """Reference (h_0, u_m0, alpha_0) with gravity; Froude and moment numbers."""

    h0: float
    u_m0: float
    alpha0: np.ndarray = field(default_factory=lambda: np.zeros(1))
    g: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha0", np.atleast_1d(np.asarray(self.alpha0, dtype=float)))
        if self.h0 <= 0 or self.g <= 0:
            raise ValueError("reference depth and gravity must be positive")

    @property
    def Fr(self) -> float:
        """Froude number |u_m0| / sqrt(g h_0); only Fr^2 enters the steady laws."""
        return abs(self.u_m0) / math.sqrt(self.g * self.h0)

    @property
    def Ma(self) -> np.ndarray:
        """Moment numbers alpha_{i,0} / u_m0; defined only for u_m0 != 0."""
        if self.u_m0 == 0.0:
            raise ValueError("moment numbers are undefined at u_m0 = 0")
        return self.alpha0 / self.u_m0

    def moment_load(self, model: ModelKind) -> float:
        """S * Fr^2, computed without dividing by u_m0.

        S = Ma_1^2/3 (PHSWME) or sum Ma_i^2/(2i+1) (SWLME, PMHSWME), so
        S Fr^2 = alpha_{1,0}^2/(3 g h_0) resp. sum alpha_{i,0}^2/((2i+1) g h_0).
        """
        _require_steady_model(model)
        gh = self.g * self.h0
        if model == ModelKind.PHSWME:
            return float(self.alpha0[0] ** 2 / (3.0 * gh))
        w = 1.0 / (2.0 * np.arange(1, self.alpha0.size + 1) + 1.0)
        return float(np.dot(self.alpha0**2, w) / gh)


def _require_steady_model(model: ModelKind) -> None:
    if model not in STEADY_MODELS:
        raise ValueError(
            f"{model.value} has no analytic steady states; "
            f"supported: {', '.join(m.value for m in STEADY_MODELS)}"
        )


def steady_residual(model: ModelKind, x, ref: ReferenceState):
    """Conjugate-depth relation evaluated at depth ratio x = h/h_0 > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("depth ratio must be positive")
    fr2 = ref.Fr**2
    t = ref.moment_load(model)
    val = -fr2 + 0.5 * (x**2 + x) + t * (x**3 + x**2 + x)
    return val if val.shape else float(val)


@dataclass(frozen=True)
class ConjugateDepths:
    """Nontrivial positive roots of the steady relation; h = h_0 reported apart."""

    trivial: float
    roots: np.ndarray
    residuals: np.ndarray


def conjugate_depths(model: ModelKind, ref: ReferenceState) -> ConjugateDepths:
    """All positive real roots of the cubic steady relation.

    Closed-form solve (quadratic for Ma = 0, depressed cubic otherwise)
    followed by one-step Newton polish; robust at the Fr = 1 double contact
    with the trivial branch.
    """
    fr2 = ref.Fr**2
    t = ref.moment_load(model)
    roots = _positive_cubic_roots(t, 0.5 + t, 0.5 + t, -fr2)
    roots = np.array(sorted(roots))
    res = np.array([steady_residual(model, x, ref) for x in roots]) if roots.size else np.zeros(0)
    return ConjugateDepths(trivial=1.0, roots=roots, residuals=res)


def _positive_cubic_roots(c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """Real positive roots of c3 x^3 + c2 x^2 + c1 x + c0, Newton-polished."""
    if c3 == 0.0:
        if c0 == 0.0:
            return []  # roots are x = 0 and a negative one
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0.0:
            return []
        r = (-c1 + math.sqrt(disc)) / (2.0 * c2)
        candidates = [r]
    else:
        b, c, d = c2 / c3, c1 / c3, c0 / c3
        p = c - b * b / 3.0
        q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
        shift = -b / 3.0
        disc = -4.0 * p**3 - 27.0 * q * q
        if disc >= 0.0:
            # three real roots (trigonometric form)
            if p == 0.0:
                ts = [0.0]
            else:
                m = 2.0 * math.sqrt(-p / 3.0)
                arg = min(1.0, max(-1.0, 3.0 * q / (p * m)))
                theta = math.acos(arg) / 3.0
                ts = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        else:
            # one real root (hyperbolic/Cardano form)
            if p < 0.0:
                m = 2.0 * math.sqrt(-p / 3.0)
                arg = 3.0 * abs(q) / (-p * m)
                ts = [-math.copysign(m * math.cosh(math.acosh(arg) / 3.0), q)]
            elif p > 0.0:
                m = 2.0 * math.sqrt(p / 3.0)
                ts = [-m * math.sinh(math.asinh(3.0 * q / (p * m)) / 3.0)]
            else:
                ts = [-math.copysign(abs(q) ** (1.0 / 3.0), q)]
        candidates = [tt + shift for tt in ts]

    def poly(x):
        return ((c3 * x + c2) * x + c1) * x + c0

    def dpoly(x):
        return (3.0 * c3 * x + 2.0 * c2) * x + c1

    out = []
    for x in candidates:
        for _ in range(2):  # Newton polish
            d = dpoly(x)
            if d != 0.0:
                x -= poly(x) / d
        if x > 1e-12 and abs(poly(x)) < 1e-9 * (1.0 + abs(c0)):
            if not any(abs(x - y) <= 1e-10 * max(1.0, abs(y)) for y in out):
                out.append(float(x))
    return out


def energy_invariant(model: ModelKind, h, u_m, alpha, g: float):
    """Generalized energy E of the steady family (see module docstring)."""
    _require_steady_model(model)
    h = np.asarray(h, dtype=float)
    u_m = np.asarray(u_m, dtype=float)
    alpha = np.atleast_2d(np.asarray(alpha, dtype=float))
    E = 0.5 * g * h**2 + h * u_m**2
    if model == ModelKind.PHSWME:
        return E + h * alpha[:, 0] ** 2 / 3.0
    w = 1.0 / (2.0 * np.arange(1, alpha.shape[1] + 1) + 1.0)
    return E + h * (alpha**2 @ w)


def steady_invariants(model: ModelKind, field1d, g: float | None = None) -> dict[str, np.ndarray]:
    """Per-cell steady invariants of a wet field.

    Accepts a Field1D (uses its primitive() arrays) or a tuple
    (h, u_m, alpha, g). Columns: discharge h u_m, energy E, alpha_1/h, and
    alpha_i for i >= 2. The field is steady when every column is constant.
    """
    _require_steady_model(model)
    if hasattr(field1d, "primitive"):
        h, u_m, alpha = field1d.primitive()
        if g is None:
            raise ValueError("gravity g is required alongside a Field1D")
    else:
        h, u_m, alpha = field1d
        if g is None:
            raise ValueError("gravity g is required")
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0.0):
        from .state import DryStateError

        raise DryStateError("steady invariants need a wet field")
    alpha = np.atleast_2d(np.asarray(alpha, dtype=float))
    cols = {
        "discharge": np.asarray(h) * np.asarray(u_m),
        "energy": energy_invariant(model, h, u_m, alpha, g),
        "alpha1_over_h": alpha[:, 0] / np.asarray(h),
    }
    for i in range(2, alpha.shape[1] + 1):
        cols[f"alpha_{i}"] = alpha[:, i - 1]
    return cols


def invariant_spreads(columns: dict[str, np.ndarray]) -> dict[str, float]:
    """max - min of each invariant column; all small <=> the field is steady."""
    return {k: float(np.max(v) - np.min(v)) for k, v in columns.items()}


# ----------------------------------------------------------------------------
# smooth manufactured steady profiles (u_m = 0 branch, N = 3)
# ----------------------------------------------------------------------------


def _alpha_derivatives(model: ModelKind, h: float, a1: float, a3: float, g: float):
    """d(alpha_1)/dh and d(alpha_3)/dh along the u_m = 0 steady family (N = 3).

    The momentum row fixes d(alpha_1)/dh; the second moment row then fixes
    d(alpha_3)/dh = 7/12 (alpha_1/h - d(alpha_1)/dh). For PHSWME the momentum
    row does not involve alpha_3 and alpha_1(h) has the closed form
    alpha_1^2 = C/h - 3 g h / 2; PMHSWME couples the pair.
    """
    if model == ModelKind.PHSWME:
        da1 = -(3.0 * g * h + a1 * a1) / (2.0 * a1 * h)
    elif model == ModelKind.PMHSWME:
        num = g + (a1 * a1 / 3.0 + a3 * a3 / 7.0 + a1 * a3 / 6.0) / h
        den = 2.0 * a1 / 3.0 - a3 / 6.0
        da1 = -num / den
    else:
        raise ValueError("smooth profiles implemented for PHSWME and PMHSWME")
    da3 = 7.0 / 12.0 * (a1 / h - da1)
    return da1, da3


def phswme_alpha1_closed_form(h, h_ref: float, alpha1_ref: float, g: float):
    """alpha_1(h) on the PHSWME u_m = 0 steady family (negative branch)."""
    C = h_ref * alpha1_ref**2 + 1.5 * g * h_ref**2
    w = C / np.asarray(h, dtype=float) - 1.5 * g * np.asarray(h, dtype=float)
    if np.any(w <= 0):
        raise ValueError("depth range leaves the real branch of the steady family")
    return -np.sqrt(w)


def smooth_steady_profile(
    model: ModelKind,
    x: np.ndarray,
    g: float = 1.0,
    alpha1_ref: float = -1.2,
    depth_amplitude: float = 0.1,
    substeps: int = 8,
):
    """Exact smooth steady solution (N = 3) sampled at the nodes x.

    Returns (h, u_m, alpha) arrays with u_m = 0, alpha_2 = 0, and
    (alpha_1, alpha_3) integrated along h(x) = 1 + depth_amplitude sin(2 pi x)
    with fixed-step RK4 (substeps per node interval), so the quasilinear
    residual of the returned samples vanishes to integration accuracy
    O((dx/substeps)^4).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ValueError("x must be an increasing 1d grid")

    def h_of(xx):
        return 1.0 + depth_amplitude * np.sin(2.0 * np.pi * xx)

    def dh_of(xx):
        return 2.0 * np.pi * depth_amplitude * np.cos(2.0 * np.pi * xx)

    def rhs(xx, y):
        a1, a3 = y
        da1, da3 = _alpha_derivatives(model, h_of(xx), a1, a3, g)
        hp = dh_of(xx)
        return np.array([da1 * hp, da3 * hp])

    n = x.size
    a = np.zeros((n, 3))
    y = np.array([alpha1_ref, 0.0])
    a[0, 0], a[0, 2] = y
    for k in range(n - 1):
        x0, x1 = x[k], x[k + 1]
        dt = (x1 - x0) / substeps
        for s in range(substeps):
            t = x0 + s * dt
            k1 = rhs(t, y)
            k2 = rhs(t + dt / 2, y + dt / 2 * k1)
            k3 = rhs(t + dt / 2, y + dt / 2 * k2)
            k4 = rhs(t + dt, y + dt * k3)
            y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        a[k + 1, 0], a[k + 1, 2] = y
    return h_of(x), np.zeros(n), a
