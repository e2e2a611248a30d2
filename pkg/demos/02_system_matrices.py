"""Build every model's transport matrix at one state and compare rows.

Shows the two variable sets, the exact similarity between them, and which
models keep the SWME momentum balance untouched.
"""

import numpy as np

from swmoments import (
    ModelKind,
    PrimitiveState,
    build_system_matrix,
    coefficient_tensors,
    jacobian_T,
    jacobian_T_inv,
)

state = PrimitiveState(h=1.2, u_m=0.4, alpha=[0.6, -0.3, 0.2])
tensors = coefficient_tensors(3)
g = 1.0

np.set_printoptions(precision=4, suppress=True, linewidth=120)
for model in ModelKind:
    Ac = build_system_matrix(model, "convective", state, tensors, g).entries
    Ap = build_system_matrix(model, "primitive", state, tensors, g).entries
    J, Ji = jacobian_T(state), jacobian_T_inv(state)
    sim = np.linalg.norm(Ap - Ji @ Ac @ J) / np.linalg.norm(Ap)
    print(f"\n{model.value.upper()}  (similarity residual {sim:.1e})")
    print(Ac)

swme_row2 = build_system_matrix(ModelKind.SWME, "convective", state, tensors, g).entries[1]
print("\nMomentum row vs SWME (max abs difference):")
for model in ModelKind:
    row2 = build_system_matrix(model, "convective", state, tensors, g).entries[1]
    tag = "unchanged" if model.unchanged_momentum else "regularized"
    print(f"  {model.value:8s} {np.max(np.abs(row2 - swme_row2)):9.2e}   ({tag})")
