"""Free-space evolution of the rotating wave system by oscillatory quadrature.

A torus run can only show dispersive decay until waves wrap around, so this
module provides the reference free of recurrence: the same dynamics on the
unbounded plane, evaluated from the continuous Fourier representation.

Splitting the wave field into potential and rotational scalar parts,
w = grad(phi) + perp-grad(psi), the symbol depends only on kappa = |k|:

    d/dtau (s, phi, psi) = A(kappa) (s, phi, psi),
    A = [[0, kappa^2, 0], [-1, 0, 1], [0, -1, 0]],

with A^3 = -(1 + kappa^2) A, so exp(tau*A) again has the Rodrigues closed
form. Starting from (s0, phi0, 0) the evolved spectra are

    s_hat(tau)   = s0_hat * (1 - kappa^2 * C) + phi0_hat * kappa^2 * S
    phi_hat(tau) = phi0_hat * cos(w*tau)      - s0_hat * S
    psi_hat(tau) = s0_hat * C                 - phi0_hat * S

with w = sqrt(1 + kappa^2), S = sin(w*tau)/w, C = (1 - cos(w*tau))/w^2.
The data transform is computed from patch samples by separable summation and
the inverse integral by tensor Gauss-Legendre quadrature over [-K, K]^2,
refined until evaluation points agree to the requested tolerance.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError, UsageError

__all__ = ["freespace_acoustic_probe", "patch_coordinates"]

MAX_POINTS = 64


def patch_coordinates(npatch: int, spacing: float) -> np.ndarray:
    """Sample coordinates of an npatch-point axis centered on the origin."""
    return (np.arange(npatch) - (npatch - 1) / 2.0) * spacing


def _spectral_cutoff(samples: np.ndarray, spacing: float, rel_cut: float = 1e-13) -> float:
    """Smallest wavenumber K beyond which the patch spectrum is negligible."""
    n = samples.shape[0]
    pad = 4 * n
    hat = np.abs(np.fft.rfft2(samples, s=(pad, pad)))
    kx = np.abs(2.0 * np.pi * np.fft.fftfreq(pad, d=spacing))
    ky = 2.0 * np.pi * np.fft.rfftfreq(pad, d=spacing)
    kmag = np.maximum(kx[:, None], ky[None, :])
    peak = hat.max()
    if peak == 0.0:
        return 1.0
    alive = hat > rel_cut * peak
    return float(min(kmag[alive].max() * 1.1 + 1.0, 0.95 * np.pi / spacing))


def _evaluate(s0, phi0, xs, tau, kcut, nquad, points, block=256):
    nodes, weights = np.polynomial.legendre.leggauss(nquad)
    k = kcut * nodes
    wq = kcut * weights
    # separable patch transforms: SA[p, j] = sum_q f[p, q] exp(-i k_j y_q)
    phase_patch = np.exp(-1j * np.outer(xs, k))
    sa = s0 @ phase_patch
    pa = phi0 @ phase_patch
    px = np.asarray([p[0] for p in points])
    py = np.asarray([p[1] for p in points])
    eval_y = np.exp(1j * np.outer(k, py)) * wq[:, None]
    vals = np.zeros((3, len(points)), dtype=np.complex128)
    h2 = (xs[1] - xs[0]) ** 2 if len(xs) > 1 else 1.0
    for start in range(0, nquad, block):
        rows = slice(start, min(start + block, nquad))
        k1 = k[rows][:, None]
        w1 = wq[rows][:, None]
        row_phase = np.exp(-1j * np.outer(xs, k[rows]))
        s_hat = h2 * (row_phase.T @ sa)
        p_hat = h2 * (row_phase.T @ pa)
        k2g = k[None, :]
        kap2 = k1**2 + k2g**2
        om = np.sqrt(1.0 + kap2)
        ang = om * tau
        sfac = np.sin(ang) / om
        cfac = (1.0 - np.cos(ang)) / (om * om)
        s_t = s_hat * (1.0 - kap2 * cfac) + p_hat * (kap2 * sfac)
        phi_t = p_hat * np.cos(ang) - s_hat * sfac
        psi_t = s_hat * cfac - p_hat * sfac
        w1_t = 1j * (k1 * phi_t - k2g * psi_t)
        w2_t = 1j * (k2g * phi_t + k1 * psi_t)
        eval_x = np.exp(1j * np.outer(k[rows], px)) * w1
        for slot, field in enumerate((s_t, w1_t, w2_t)):
            vals[slot] += np.sum(eval_x * (field @ eval_y), axis=0)
    return vals.real / (4.0 * np.pi**2)


def freespace_acoustic_probe(
    s0_samples: np.ndarray,
    phi0_samples: np.ndarray,
    spacing: float,
    tau: float,
    points,
    tol: float = 1e-6,
    start_nodes: int = 256,
    max_nodes: int = 4096,
) -> dict[str, np.ndarray]:
    """Evaluate the free-space solution at fast time tau and the given points.

    ``s0_samples`` and ``phi0_samples`` are square arrays sampling compactly
    concentrated data on a uniform patch centered at the origin; ``points``
    is a short list (at most 64) of (x, y) positions. The quadrature doubles
    its node count until successive evaluations agree within ``tol`` (max
    absolute difference over points and components); failure to converge
    raises :class:`QuadratureError` reporting the achieved tolerance.

    Returns arrays ``s``, ``w1``, ``w2`` of field values at the points.
    """
    s0 = np.asarray(s0_samples, dtype=np.float64)
    phi0 = np.asarray(phi0_samples, dtype=np.float64)
    if s0.shape != phi0.shape or s0.ndim != 2 or s0.shape[0] != s0.shape[1]:
        raise UsageError("patch samples must be two square arrays of equal shape")
    pts = list(points)
    if not 0 < len(pts) <= MAX_POINTS:
        raise UsageError(f"need between 1 and {MAX_POINTS} evaluation points")
    xs = patch_coordinates(s0.shape[0], spacing)
    kcut = max(_spectral_cutoff(s0, spacing), _spectral_cutoff(phi0, spacing))
    prev = _evaluate(s0, phi0, xs, tau, kcut, start_nodes, pts)
    nquad = start_nodes
    achieved = np.inf
    while nquad < max_nodes:
        nquad *= 2
        cur = _evaluate(s0, phi0, xs, tau, kcut, nquad, pts)
        achieved = float(np.max(np.abs(cur - prev)))
        if achieved <= tol:
            return {"s": cur[0], "w1": cur[1], "w2": cur[2], "achieved_tol": achieved}
        prev = cur
    raise QuadratureError(achieved=achieved, requested=tol)
