"""Relative-energy diagnostics and the essential/residual density split.

The relative energy between a conservative state (rho, m) and a smooth test
pair (r, U) is the Bregman-type distance

    E = integral of  rho/2 * |m/rho - U|^2
        + (1/epsilon^2) * [P(rho) - P'(r)(rho - r) - P(r)]  dx,

nonnegative, and zero exactly when (rho, m) = (r, r U). The test pair is
assembled from the evolving geostrophic stream function q and the evolving
wave field (s, w):  r = 1 + epsilon*(q + s),  U = perp-grad q + w.

Each sample also records how far the momentum sits from the limit balance:
the L2 norms of div m and of omega x m + grad((rho-1)/epsilon). On a torus
the wave content keeps those pointwise norms O(1) forever (wave energy is
conserved; nothing radiates to infinity), so vanishing is expected only for
their time averages taken field-wise first -- the weak sense. The sweep
accumulates those averaged fields and reports both numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .acoustic import AcousticState
from .errors import ConfigError, UsageError
from .euler import ConservativeState
from .fields import (
    Grid2,
    ScalarField,
    VecField2,
    divergence,
    gradient,
    l2_norm,
    perp_gradient,
)
from .thermo import PressureLaw

__all__ = [
    "CutoffPsi",
    "RelEnergyAnsatz",
    "RelEnergyRecord",
    "build_ansatz",
    "relative_energy",
    "balance_residual_field",
    "essential_residual_split",
    "convergence_metrics",
]


@dataclass(frozen=True)
class CutoffPsi:
    """Smooth density cutoff: 1 on [3/4, 5/4], supported in [1/2, 3/2].

    The transitions are quintic smoothstep ramps, so psi is C^2 and takes
    values in [0, 1]. Splitting any quantity as (psi*h, (1-psi)*h) separates
    its near-equilibrium (essential) part from the far (residual) part.
    """

    plateau: tuple[float, float] = (0.75, 1.25)
    support: tuple[float, float] = (0.5, 1.5)

    def __call__(self, rho):
        lo, hi = self.support
        plo, phi = self.plateau
        rho = np.asarray(rho, dtype=np.float64)
        up = np.clip((rho - lo) / (plo - lo), 0.0, 1.0)
        down = np.clip((hi - rho) / (hi - phi), 0.0, 1.0)
        ramp_up = up * up * up * (up * (6.0 * up - 15.0) + 10.0)
        ramp_down = down * down * down * (down * (6.0 * down - 15.0) + 10.0)
        return ramp_up * ramp_down


@dataclass(frozen=True, eq=False)
class RelEnergyAnsatz:
    """Test pair (r, U) for the relative energy at one instant."""

    r: ScalarField
    U: VecField2
    epsilon: float

    def __post_init__(self):
        if self.r.grid != self.U.grid:
            raise UsageError("ansatz fields live on different grids")
        if float(self.r.values.min()) <= 0.0:
            raise ConfigError(
                f"ansatz density is nonpositive (min r = {self.r.values.min():.3e})"
            )

    @property
    def grid(self) -> Grid2:
        return self.r.grid


@dataclass(frozen=True)
class RelEnergyRecord:
    """One time sample of the relative energy and the balance residuals."""

    time: float
    e_total: float
    e_kinetic: float
    e_potential: float
    div_residual: float
    balance_residual: float


def build_ansatz(q: ScalarField, acoustic: AcousticState, epsilon: float) -> RelEnergyAnsatz:
    """Assemble r = 1 + epsilon*(q + s) and U = perp-grad q + w."""
    if acoustic.epsilon != epsilon:
        raise UsageError(
            f"acoustic state carries epsilon={acoustic.epsilon}, ansatz wants {epsilon}"
        )
    if q.grid != acoustic.grid:
        raise UsageError("q and acoustic state live on different grids")
    g = q.grid
    r = ScalarField(g, 1.0 + epsilon * (q.values + acoustic.s.values))
    v = perp_gradient(q)
    U = VecField2.from_arrays(
        g, v.x.values + acoustic.w.x.values, v.y.values + acoustic.w.y.values
    )
    return RelEnergyAnsatz(r, U, epsilon)


def balance_residual_field(state: ConservativeState) -> VecField2:
    """omega x m + grad((rho - 1)/epsilon), the rotation/pressure-gradient
    imbalance that must vanish (weakly) in the limit."""
    g = state.grid
    rho1 = ScalarField(g, (state.rho.values - 1.0) / state.epsilon)
    grad_rho1 = gradient(rho1)
    return VecField2.from_arrays(
        g,
        -state.m.y.values + grad_rho1.x.values,
        state.m.x.values + grad_rho1.y.values,
    )


def relative_energy(
    state: ConservativeState,
    ansatz: RelEnergyAnsatz,
    law: PressureLaw | None = None,
) -> RelEnergyRecord:
    """Evaluate the relative energy of a state against a test pair."""
    law = law or PressureLaw()
    if state.grid != ansatz.grid:
        raise UsageError("state and ansatz live on different grids")
    if state.epsilon != ansatz.epsilon:
        raise UsageError(
            f"state epsilon={state.epsilon} but ansatz epsilon={ansatz.epsilon}"
        )
    g = state.grid
    rho = state.rho.values
    du = state.m.x.values / rho - ansatz.U.x.values
    dv = state.m.y.values / rho - ansatz.U.y.values
    e_kin = 0.5 * float(np.sum(rho * (du * du + dv * dv))) * g.cell_area
    pot = np.empty_like(rho)
    kernels.relative_pressure_grid(rho, ansatz.r.values, law.gamma, pot)
    e_pot = float(np.sum(pot)) * g.cell_area / state.epsilon**2
    div_res = l2_norm(divergence(state.m))
    bal = balance_residual_field(state)
    bal_res = float(
        np.sqrt(np.sum(bal.x.values**2 + bal.y.values**2) * g.cell_area)
    )
    return RelEnergyRecord(
        time=state.time,
        e_total=e_kin + e_pot,
        e_kinetic=e_kin,
        e_potential=e_pot,
        div_residual=div_res,
        balance_residual=bal_res,
    )


def essential_residual_split(
    h: ScalarField, rho: ScalarField, psi: CutoffPsi | None = None
) -> tuple[ScalarField, ScalarField]:
    """Partition h into (psi(rho)*h, (1-psi(rho))*h); the parts sum back to h."""
    if h.grid != rho.grid:
        raise UsageError("h and rho live on different grids")
    psi = psi or CutoffPsi()
    weights = psi(rho.values)
    ess = weights * h.values
    return ScalarField(h.grid, ess), ScalarField(h.grid, h.values - ess)


def convergence_metrics(runs: list[tuple[float, list[RelEnergyRecord]]]) -> dict:
    """Cross-run summary: per epsilon the supremum of E over time and the
    time-averaged residual norms, plus consecutive reduction ratios.

    Runs must share the sample-time grid (same data and horizon); entries are
    ordered by decreasing epsilon.
    """
    if len(runs) < 2:
        raise UsageError("need at least two runs to compare")
    times0 = [rec.time for rec in runs[0][1]]
    for eps, records in runs:
        if not (eps > 0.0):
            raise UsageError(f"epsilon must be positive, got {eps}")
        times = [rec.time for rec in records]
        if len(times) != len(times0) or not np.allclose(times, times0, rtol=0, atol=1e-12):
            raise UsageError("runs sample different time grids; configurations mismatch")
    ordered = sorted(runs, key=lambda item: -item[0])
    per_eps = []
    for eps, records in ordered:
        per_eps.append(
            {
                "epsilon": eps,
                "sup_E": max(rec.e_total for rec in records),
                "mean_div_residual": float(np.mean([rec.div_residual for rec in records])),
                "mean_balance_residual": float(
                    np.mean([rec.balance_residual for rec in records])
                ),
            }
        )

    def ratios(key):
        vals = [row[key] for row in per_eps]
        return [
            vals[i + 1] / vals[i] if vals[i] != 0.0 else (1.0 if vals[i + 1] == 0.0 else np.inf)
            for i in range(len(vals) - 1)
        ]

    return {
        "per_epsilon": per_eps,
        "ratios": {
            "sup_E": ratios("sup_E"),
            "mean_div_residual": ratios("mean_div_residual"),
            "mean_balance_residual": ratios("mean_balance_residual"),
        },
    }
