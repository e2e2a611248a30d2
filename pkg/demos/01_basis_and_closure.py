"""Walk through the vertical basis and the closure tensors.

The velocity profile u(zeta) on [0,1] is expanded in shifted Legendre
polynomials normalized to 1 at the bottom. This script evaluates the basis,
projects a linear profile onto it, and prints the small closure tensors the
moment systems are built from.
"""

import numpy as np

from swmoments import coefficient_tensors, phi, project_profile

z = np.linspace(0.0, 1.0, 5)
print("zeta      ", np.round(z, 3))
for i in range(4):
    print(f"phi_{i}(z)  ", np.round(phi(i, z), 4))

print("\nProjection of the dam-break profile u(zeta) = 0.5 zeta, N = 3:")
u_m, alpha = project_profile(lambda s: 0.5 * s, 3)
print("  u_m   =", u_m)
print("  alpha =", np.round(alpha, 12), " (only alpha_1 is active)")

t = coefficient_tensors(2)
print("\nClosure tensors at N = 2 (1-based indices):")
print("  A_111 =", t.A[1, 1, 1], " (vanishes: odd integrand)")
print("  A_211 =", t.A[2, 1, 1])
print("  B_211 =", t.B[2, 1, 1])
print("  A_211 + B_211 =", t.A[2, 1, 1] + t.B[2, 1, 1], " -> the -1/3 in the")
print("  regularized first column; only the second moment row keeps it.")
print("  friction matrix D:\n", np.round(t.D[1:, 1:], 10))
