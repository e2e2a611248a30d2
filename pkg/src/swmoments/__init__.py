"""Shallow water moment models: matrices, spectra, steady states, FV solver.

The package implements the six-model hierarchy SWME, HSWME, SWLME, MHSWME,
PHSWME, PMHSWME in primitive and convective variables, their closed-form
characteristic polynomials and eigenvalues, analytic steady states, and a
first-order path-consistent finite-volume solver for dam-break style
comparisons.
"""

__version__ = "0.1.0"

from .basis import (
    CoefficientTensors,
    Quadrature,
    coefficient_tensors,
    gauss_legendre_01,
    phi,
    phi_antideriv,
    phi_prime,
    project_profile,
)
from .models import ModelKind, SystemMatrix, build_system_matrix, lowering_block
from .solver import Field1D, Friction, SolverConfig, friction_source, path_fluctuations, run, step
from .spectral import (
    SpectralReport,
    analytic_eigenvalues,
    char_poly_eval,
    legendre_deriv_roots,
    numeric_spectrum,
    scan_hyperbolicity_region,
    spectral_report,
)
from .state import (
    ConvectiveState,
    DryStateError,
    PrimitiveState,
    jacobian_T,
    jacobian_T_inv,
    to_convective,
    to_primitive,
)
from .steady import (
    ConjugateDepths,
    ReferenceState,
    conjugate_depths,
    smooth_steady_profile,
    steady_invariants,
    steady_residual,
)

__all__ = [
    "CoefficientTensors",
    "ConjugateDepths",
    "ConvectiveState",
    "DryStateError",
    "Field1D",
    "Friction",
    "ModelKind",
    "PrimitiveState",
    "Quadrature",
    "ReferenceState",
    "SolverConfig",
    "SpectralReport",
    "SystemMatrix",
    "analytic_eigenvalues",
    "build_system_matrix",
    "char_poly_eval",
    "coefficient_tensors",
    "conjugate_depths",
    "friction_source",
    "gauss_legendre_01",
    "jacobian_T",
    "jacobian_T_inv",
    "legendre_deriv_roots",
    "lowering_block",
    "numeric_spectrum",
    "path_fluctuations",
    "phi",
    "phi_antideriv",
    "phi_prime",
    "project_profile",
    "run",
    "scan_hyperbolicity_region",
    "smooth_steady_profile",
    "spectral_report",
    "steady_invariants",
    "steady_residual",
    "step",
    "to_convective",
    "to_primitive",
]
