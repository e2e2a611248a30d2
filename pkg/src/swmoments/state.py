"""Primitive and convective state vectors and the exact change of variables.

Primitive unknowns are (h, u_m, alpha_1..alpha_N), convective unknowns are
(h, h u_m, h alpha_1..h alpha_N). The map T between them is invertible for
h > 0 with lower-triangular Jacobians; system matrices in the two variable
sets are similar, A_p = J^-1 A_c J with J = dT/dU_p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_H_MIN = 1e-8


class DryStateError(ValueError):
    """Water depth at or below the dry floor; the transformation is singular."""


@dataclass(frozen=True)
class PrimitiveState:
    h: float
    u_m: float
    alpha: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "alpha", np.atleast_1d(np.asarray(self.alpha, dtype=float)))
        if not np.isfinite(self.h) or not np.isfinite(self.u_m) or not np.all(np.isfinite(self.alpha)):
            raise ValueError("state entries must be finite")
        if self.h <= 0.0:
            raise DryStateError(f"water depth must be positive, got h={self.h}")

    @property
    def N(self) -> int:
        return self.alpha.size

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.h, self.u_m], self.alpha))


@dataclass(frozen=True)
class ConvectiveState:
    h: float
    hu_m: float
    halpha: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "halpha", np.atleast_1d(np.asarray(self.halpha, dtype=float)))
        if not np.isfinite(self.h) or not np.isfinite(self.hu_m) or not np.all(np.isfinite(self.halpha)):
            raise ValueError("state entries must be finite")

    @property
    def N(self) -> int:
        return self.halpha.size

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.h, self.hu_m], self.halpha))


def to_convective(U_p: PrimitiveState) -> ConvectiveState:
    """U_c = T(U_p), componentwise multiplication by h."""
    return ConvectiveState(h=U_p.h, hu_m=U_p.h * U_p.u_m, halpha=U_p.h * U_p.alpha)


def to_primitive(U_c: ConvectiveState, h_min: float = DEFAULT_H_MIN) -> PrimitiveState:
    """U_p = T^-1(U_c); raises DryStateError below the configurable floor."""
    if U_c.h <= h_min:
        raise DryStateError(f"h={U_c.h} at or below dry floor {h_min}")
    return PrimitiveState(h=U_c.h, u_m=U_c.hu_m / U_c.h, alpha=U_c.halpha / U_c.h)


def jacobian_T(U_p: PrimitiveState) -> np.ndarray:
    """dT/dU_p: first column (1, u_m, alpha_i), diagonal (1, h, ..., h)."""
    n = U_p.N + 2
    J = np.eye(n)
    J[1, 0] = U_p.u_m
    J[2:, 0] = U_p.alpha
    J[1:, 1:] *= U_p.h
    return J


def jacobian_T_inv(U_p: PrimitiveState, h_min: float = DEFAULT_H_MIN) -> np.ndarray:
    """Exact inverse of jacobian_T: first column (1, -u_m/h, -alpha_i/h), diagonal 1/h."""
    if U_p.h <= h_min:
        raise DryStateError(f"h={U_p.h} at or below dry floor {h_min}")
    n = U_p.N + 2
    J = np.eye(n)
    J[1, 0] = -U_p.u_m / U_p.h
    J[2:, 0] = -U_p.alpha / U_p.h
    J[1:, 1:] /= U_p.h
    return J
