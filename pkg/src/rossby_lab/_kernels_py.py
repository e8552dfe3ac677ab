"""Pure-NumPy implementations of the hot kernels.

Mirrors the compiled extension in ``_kernels.pyx``; selected at import time
by :mod:`rossby_lab.kernels` when the extension is missing or disabled.
"""

from __future__ import annotations

import numpy as np


def modal_propagate(s, w1, w2, kx, ky, sfac, cfac):
    """Apply the exact mode-wise propagator of the rotating wave system, in place.

    Per mode k the generator is the skew matrix
        M(k) = [[0, -i*kx, -i*ky], [-i*kx, 0, 1], [-i*ky, -1, 0]]
    with M^3 = -(1 + |k|^2) M, so the exponential over an interval of fast
    time tau has the closed form
        exp(tau*M) = I + sfac*M + cfac*M^2,
    where sfac = sin(w*tau)/w, cfac = (1 - cos(w*tau))/w^2, w = sqrt(1+|k|^2).
    The caller supplies sfac/cfac precomputed so repeated steps share them.
    """
    m0 = -1j * (kx * w1 + ky * w2)
    m1 = -1j * kx * s + w2
    m2 = -1j * ky * s - w1
    n0 = -1j * (kx * m1 + ky * m2)
    n1 = -1j * kx * m0 + m2
    n2 = -1j * ky * m0 - m1
    s += sfac * m0 + cfac * n0
    w1 += sfac * m1 + cfac * n1
    w2 += sfac * m2 + cfac * n2


def relative_pressure_grid(rho, r, gamma, out):
    """Pointwise Bregman distance of the pressure potential P on arrays.

    P(x) = (x**gamma - x) / (gamma*(gamma-1)); out = P(rho) - P(r) - P'(r)*(rho-r).
    """
    if gamma == 2.0:
        np.square(rho - r, out=out)
        out *= 0.5
        return
    c = 1.0 / (gamma * (gamma - 1.0))
    p_rho = (rho**gamma - rho) * c
    p_r = (r**gamma - r) * c
    dp_r = (gamma * r ** (gamma - 1.0) - 1.0) * c
    np.subtract(p_rho, p_r, out=out)
    out -= dp_r * (rho - r)


def pressure_remainder_grid(rho, gamma, out):
    """Nonlinear pressure remainder p(rho) - p(1) - p'(1)*(rho - 1), pointwise."""
    if gamma == 2.0:
        np.square(rho - 1.0, out=out)
        out *= 0.5
        return
    np.power(rho, gamma, out=out)
    out -= 1.0
    out /= gamma
    out -= rho - 1.0
