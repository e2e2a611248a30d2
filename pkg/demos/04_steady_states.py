"""Conjugate depths and steady invariants.

For SWLME, PHSWME and PMHSWME the steady states generalize the hydraulic
jump: the depth ratio solves a cubic whose Ma -> 0 limit is the classical
shallow-water formula. The invariant columns stay flat across a jump built
from the computed root, and a smooth exact steady profile drives the
quasilinear residual to zero at second order.
"""

import numpy as np

from swmoments import (
    ModelKind,
    PrimitiveState,
    ReferenceState,
    build_system_matrix,
    coefficient_tensors,
    conjugate_depths,
    smooth_steady_profile,
    steady_invariants,
)
from swmoments.steady import invariant_spreads

print("Conjugate depth ratios h/h0 (trivial branch h = h0 always exists):")
print(f"{'Fr':>5} {'Ma1':>5}   SWE-closed-form   PHSWME        PMHSWME")
for fr, ma1 in [(0.5, 0.0), (2.0, 0.0), (2.0, 0.4), (3.0, 0.8)]:
    ref = ReferenceState(h0=1.0, u_m0=fr, alpha0=[ma1 * fr], g=1.0)
    swe = (-1 + np.sqrt(1 + 8 * fr**2)) / 2
    r_ph = conjugate_depths(ModelKind.PHSWME, ref).roots
    r_pm = conjugate_depths(ModelKind.PMHSWME, ref).roots
    print(f"{fr:5.1f} {ma1:5.1f}   {swe:14.10f}   {r_ph[0]:.10f}  {r_pm[0]:.10f}")

print("\nInvariants across a PHSWME jump (64 cells, two levels):")
ref = ReferenceState(h0=1.0, u_m0=2.0, alpha0=[0.5], g=1.0)
x_star = conjugate_depths(ModelKind.PHSWME, ref).roots[0]
h = np.r_[np.ones(32), np.full(32, x_star)]
u = 2.0 / h
al = (0.5 * h)[:, None]
spreads = invariant_spreads(steady_invariants(ModelKind.PHSWME, (h, u, al), g=1.0))
for k, v in spreads.items():
    print(f"  spread of {k:14s} = {v:.2e}")

print("\nQuasilinear residual of the smooth steady family (PMHSWME, N = 3):")
tensors = coefficient_tensors(3)
prev = None
for n in (32, 64, 128, 256):
    x = np.linspace(0, 1, n + 1)
    hh, uu, aa = smooth_steady_profile(ModelKind.PMHSWME, x)
    dx = x[1] - x[0]
    worst = 0.0
    for i in range(1, n):
        A = build_system_matrix(ModelKind.PMHSWME, "primitive",
                                PrimitiveState(hh[i], uu[i], aa[i]), tensors, 1.0).entries
        dU = np.r_[hh[i+1]-hh[i-1], uu[i+1]-uu[i-1], aa[i+1]-aa[i-1]] / (2 * dx)
        worst = max(worst, np.max(np.abs(A @ dU)))
    rate = "" if prev is None else f"   observed order {np.log2(prev / worst):.3f}"
    print(f"  n = {n:4d}: max residual {worst:.3e}{rate}")
    prev = worst
