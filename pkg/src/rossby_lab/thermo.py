"""Isentropic pressure law and the convex pressure potential.

The law p(rho) = rho**gamma / gamma is normalized so that p'(1) = 1 and
P''(1) = 1, where P is the pressure potential

    P(rho) = rho * int_1^rho p(z)/z^2 dz = (rho**gamma - rho) / (gamma*(gamma-1)).

Its Bregman distance P(rho) - P(r) - P'(r)*(rho - r) is the potential-energy
density used by every relative-energy functional in the package; it is
nonnegative by convexity and vanishes only at rho = r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernels import relative_pressure_grid

__all__ = [
    "PressureLaw",
    "pressure",
    "pressure_potential",
    "relative_pressure_potential",
]


@dataclass(frozen=True)
class PressureLaw:
    """Barotropic law p(rho) = rho**gamma / gamma with gamma in (1, 3]."""

    gamma: float = 2.0

    def __post_init__(self):
        if not (1.0 < self.gamma <= 3.0):
            raise DomainError(f"gamma must lie in (1, 3], got {self.gamma}")

    @property
    def potential_coeff(self) -> float:
        return 1.0 / (self.gamma * (self.gamma - 1.0))


def _check_nonneg(rho, name: str):
    arr = np.asarray(rho, dtype=np.float64)
    if np.any(arr < 0.0):
        raise DomainError(f"{name} must be nonnegative")
    return arr


def pressure(law: PressureLaw, rho):
    """Return (p(rho), p'(rho)) = (rho**gamma / gamma, rho**(gamma-1)).

    Accepts scalars or arrays; rho must be nonnegative.
    """
    arr = _check_nonneg(rho, "rho")
    g = law.gamma
    p = arr**g / g
    dp = arr ** (g - 1.0)
    if np.isscalar(rho):
        return float(p), float(dp)
    return p, dp


def pressure_potential(law: PressureLaw, rho):
    """Pressure potential P(rho) = (rho**gamma - rho)/(gamma*(gamma-1)).

    Continuous extension P(0) = 0; satisfies P(1) = 0 and P''(rho) = p'(rho)/rho.
    """
    arr = _check_nonneg(rho, "rho")
    val = (arr**law.gamma - arr) * law.potential_coeff
    return float(val) if np.isscalar(rho) else val


def relative_pressure_potential(law: PressureLaw, rho, r):
    """Bregman distance P(rho) - P(r) - P'(r)*(rho - r).

    Nonnegative for rho >= 0, r > 0; zero exactly when rho = r. Near r it
    behaves like P''(r)/2 * (rho - r)**2, which drives the epsilon^-2 scaling
    of the potential part of the relative energy.
    """
    rho_a = _check_nonneg(rho, "rho")
    r_a = np.asarray(r, dtype=np.float64)
    if np.any(r_a <= 0.0):
        raise DomainError("reference density r must be positive")
    rho_b, r_b = np.broadcast_arrays(rho_a, r_a)
    out = np.empty(rho_b.shape)
    if out.ndim == 2:
        relative_pressure_grid(
            np.ascontiguousarray(rho_b), np.ascontiguousarray(r_b), law.gamma, out
        )
    else:
        flat = np.empty((1, out.size))
        relative_pressure_grid(
            np.ascontiguousarray(rho_b.reshape(1, -1)),
            np.ascontiguousarray(r_b.reshape(1, -1)),
            law.gamma,
            flat,
        )
        out = flat.reshape(rho_b.shape)
    if np.isscalar(rho) and np.isscalar(r):
        return float(out)
    return out
