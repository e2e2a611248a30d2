"""Closed-form spectra vs dense QR, and hyperbolicity region rasters.

The regularized models have analytic eigenvalues built from the roots of a
Legendre-polynomial derivative plus one square-root pair. MHSWME loses the
real pair when the higher moments get large; the scan maps that region and
writes it as CSV (the same file `swmoments hypregion` produces).
"""

import numpy as np

from swmoments import (
    ModelKind,
    PrimitiveState,
    analytic_eigenvalues,
    coefficient_tensors,
    scan_hyperbolicity_region,
    spectral_report,
)

tensors = coefficient_tensors(2)
state = PrimitiveState(h=1.0, u_m=0.0, alpha=[1.0, 7.0])
print("PHSWME at (h=1, u_m=0, alpha=(1,7)), g=1:")
rep = spectral_report(ModelKind.PHSWME, state, tensors)
print("  eigenvalues      ", np.round(rep.eigenvalues.real, 10))
print("  analytic         ", np.round(analytic_eigenvalues(ModelKind.PHSWME, state), 10))
print("  gap              ", rep.analytic_mismatch)
print("  note: alpha_2 = 7 plays no role; the spectrum sees only alpha_1")

state2 = PrimitiveState(h=1.0, u_m=0.0, alpha=[0.5, 4.0])
rep2 = spectral_report(ModelKind.MHSWME, state2, tensors)
print("\nMHSWME at alpha = (0.5, 4): hyperbolic =", rep2.hyperbolic,
      " max|Im| =", round(rep2.max_imag, 4))

print("\nScanning the MHSWME region (a_2^2 = 5(1 + a_1^2) is the boundary)...")
scan = scan_hyperbolicity_region(ModelKind.MHSWME, 2, [(-6, 6), (-6, 6)], 81, tensors)
print("  fraction hyperbolic:", round(scan.fraction_hyperbolic(), 4))
scan.write_csv("mhswme_region.csv")
print("  raster written to mhswme_region.csv")

for model in (ModelKind.PHSWME, ModelKind.PMHSWME):
    s = scan_hyperbolicity_region(model, 2, [(-6, 6), (-6, 6)], 41, tensors)
    print(f"  {model.value}: fraction hyperbolic = {s.fraction_hyperbolic()}")
