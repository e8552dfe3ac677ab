"""Scaled rotating compressible flow in conservative variables.

State is (rho, m) with momentum m = rho*u and a small parameter epsilon
playing both the Mach and the Rossby number. Writing sigma = (rho - 1)/epsilon,
the dynamics split into

  * a stiff linear part, (1/epsilon) * the same skew-adjoint generator as the
    rotating wave system acting on (sigma, m) -- advanced exactly per Fourier
    mode by the closed-form propagator, so the time step never needs to
    resolve 1/epsilon; and
  * a slow nonlinear part: momentum advection -div(m (x) m / rho) plus the
    gradient of the quadratic pressure remainder
    p(rho) - p(1) - p'(1)*(rho - 1), which stays O(1) as epsilon -> 0 for
    rho = 1 + O(epsilon). The density tendency of the slow part is zero.

One step composes exp(dt/2 * fast) o RK2(slow, dt) o exp(dt/2 * fast)
(Strang), second order in dt at fixed epsilon. The k = 0 density mode is
untouched by either part, so total mass is conserved to round-off. Densities
below the configured floor abort the step rather than being clipped: silent
clipping would corrupt every energy measurement downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .acoustic import ModePropagator, propagator_matrix
from .errors import CFLError, ConfigError, DensityFloorError, UsageError
from .fields import (
    Grid2,
    ScalarField,
    VecField2,
    divergence,
    ensure_finite,
    gradient,
    max_norm,
)
from .thermo import PressureLaw

__all__ = [
    "ConservativeState",
    "IllPreparedData",
    "init_ill_prepared",
    "fast_propagator",
    "slow_rhs",
    "euler_step",
    "EulerStepper",
    "total_energy",
    "total_mass",
    "cfl_number",
    "DENSITY_FLOOR",
    "CFL_LIMIT",
]

DENSITY_FLOOR = 1e-6
CFL_LIMIT = 0.5


@dataclass(frozen=True, eq=False)
class ConservativeState:
    """Density, momentum, scale parameter, elapsed time."""

    rho: ScalarField
    m: VecField2
    epsilon: float
    time: float = 0.0

    def __post_init__(self):
        if self.rho.grid != self.m.grid:
            raise UsageError("rho and m live on different grids")
        if not (self.epsilon > 0.0):
            raise UsageError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def grid(self) -> Grid2:
        return self.rho.grid

    def velocity(self) -> VecField2:
        g = self.grid
        return VecField2.from_arrays(
            g, self.m.x.values / self.rho.values, self.m.y.values / self.rho.values
        )


@dataclass(frozen=True, eq=False)
class IllPreparedData:
    """Velocity data split as u0 = v0 + grad(phi0), plus the density datum s0.

    v0 must be divergence-free (the solenoidal Helmholtz part); phi0 carries
    the potential part exciting fast oscillations.
    """

    s0: ScalarField
    v0: VecField2
    phi0: ScalarField

    def __post_init__(self):
        if self.s0.grid != self.v0.grid or self.s0.grid != self.phi0.grid:
            raise UsageError("ill-prepared data fields live on different grids")
        div = max_norm(divergence(self.v0))
        scale = max(max_norm(self.v0.x), max_norm(self.v0.y), 1.0)
        if div > 1e-12 * scale:
            raise UsageError(f"v0 is not divergence-free: |div v0| = {div:.3e}")

    @property
    def grid(self) -> Grid2:
        return self.s0.grid

    def velocity(self) -> VecField2:
        """Full velocity datum u0 = v0 + grad(phi0)."""
        gphi = gradient(self.phi0)
        g = self.grid
        return VecField2.from_arrays(
            g, self.v0.x.values + gphi.x.values, self.v0.y.values + gphi.y.values
        )


def init_ill_prepared(data: IllPreparedData, epsilon: float) -> ConservativeState:
    """Build the t = 0 state: rho = 1 + epsilon*s0, m = rho*(v0 + grad phi0)."""
    if not (epsilon > 0.0):
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    g = data.grid
    rho = 1.0 + epsilon * data.s0.values
    if rho.min() <= 0.0:
        raise ConfigError(
            f"epsilon={epsilon} makes density nonpositive (min rho = {rho.min():.3e})"
        )
    u = data.velocity()
    m = VecField2.from_arrays(g, rho * u.x.values, rho * u.y.values)
    return ConservativeState(ScalarField(g, rho), m, epsilon)


def fast_propagator(k, epsilon: float, dt: float) -> np.ndarray:
    """exp(dt * M(k)/epsilon) on (sigma, m1, m2): the stiff part is exactly the
    rotating-wave generator, so this is the acoustic propagator matrix."""
    return propagator_matrix(k, epsilon, dt)


def _slow_tendency(
    grid: Grid2,
    law: PressureLaw,
    rho: np.ndarray,
    m1: np.ndarray,
    m2: np.ndarray,
    epsilon: float,
    floor: float,
):
    if rho.min() <= floor:
        raise DensityFloorError(float(rho.min()), floor)
    u1 = m1 / rho
    u2 = m2 / rho
    t11_hat = grid.forward(m1 * u1)
    t12_hat = grid.forward(m1 * u2)
    t22_hat = grid.forward(m2 * u2)
    rem = np.empty_like(rho)
    kernels.pressure_remainder_grid(rho, law.gamma, rem)
    rem_hat = grid.forward(rem) / epsilon**2
    ikx, iky = 1j * grid.kx, 1j * grid.ky
    g1_hat = -(grid.dealias_mask * (ikx * t11_hat + iky * t12_hat + ikx * rem_hat))
    g2_hat = -(grid.dealias_mask * (ikx * t12_hat + iky * t22_hat + iky * rem_hat))
    return grid.inverse(g1_hat), grid.inverse(g2_hat)


def slow_rhs(state: ConservativeState, law: PressureLaw | None = None):
    """Slow tendencies for (sigma, m): identically zero for sigma, and
    -dealias(div(m (x) m / rho) + grad(pressure remainder)/epsilon^2) for m."""
    law = law or PressureLaw()
    g = state.grid
    d1, d2 = _slow_tendency(
        g,
        law,
        state.rho.values,
        state.m.x.values,
        state.m.y.values,
        state.epsilon,
        DENSITY_FLOOR,
    )
    return ScalarField.zeros(g), VecField2.from_arrays(g, d1, d2)


def total_mass(state: ConservativeState) -> float:
    return float(np.sum(state.rho.values)) * state.grid.cell_area


def cfl_number(state: ConservativeState, dt: float) -> float:
    umax = float(np.max(state.velocity().magnitude()))
    return umax * dt / state.grid.dx


def total_energy(state: ConservativeState, law: PressureLaw | None = None) -> float:
    """Scaled total energy: integral of |m|^2/(2 rho) plus the relative
    pressure potential against the background, divided by epsilon^2."""
    law = law or PressureLaw()
    rho = state.rho.values
    if rho.min() <= 0.0:
        raise DensityFloorError(float(rho.min()), 0.0, state)
    kinetic = 0.5 * (state.m.x.values**2 + state.m.y.values**2) / rho
    pot = np.empty_like(rho)
    kernels.relative_pressure_grid(rho, np.ones_like(rho), law.gamma, pot)
    total = np.sum(kinetic) + np.sum(pot) / state.epsilon**2
    return float(total) * state.grid.cell_area


class EulerStepper:
    """Strang-split integrator bound to one grid, law, epsilon, and dt."""

    def __init__(
        self,
        grid: Grid2,
        law: PressureLaw,
        epsilon: float,
        dt: float,
        hyperdiffusion: float = 0.0,
        density_floor: float = DENSITY_FLOOR,
        nonlinear: bool = True,
    ):
        if not (dt > 0.0):
            raise UsageError(f"dt must be positive, got {dt}")
        self.grid = grid
        self.law = law
        self.epsilon = float(epsilon)
        self.dt = float(dt)
        self.nonlinear = nonlinear
        self.density_floor = density_floor
        self._half = ModePropagator(grid, epsilon, dt / 2.0)
        if hyperdiffusion > 0.0:
            self._damp = np.exp(-hyperdiffusion * grid.k2**4 * dt)
        else:
            self._damp = None

    def _check(self, state: ConservativeState):
        rho_min = float(state.rho.values.min())
        if rho_min <= self.density_floor:
            raise DensityFloorError(rho_min, self.density_floor, state)
        cfl = cfl_number(state, self.dt)
        if cfl > CFL_LIMIT:
            raise CFLError(cfl, CFL_LIMIT, self.dt)

    def step(self, state: ConservativeState) -> ConservativeState:
        self._check(state)
        g, eps, dt = self.grid, self.epsilon, self.dt
        sig_hat = g.forward((state.rho.values - 1.0) / eps)
        m1_hat = g.forward(state.m.x.values)
        m2_hat = g.forward(state.m.y.values)
        self._half.apply(sig_hat, m1_hat, m2_hat)
        if self.nonlinear:
            rho = 1.0 + eps * g.inverse(sig_hat)
            m1 = g.inverse(m1_hat)
            m2 = g.inverse(m2_hat)
            f1a, f1b = _slow_tendency(g, self.law, rho, m1, m2, eps, self.density_floor)
            f2a, f2b = _slow_tendency(
                g,
                self.law,
                rho,
                m1 + 0.5 * dt * f1a,
                m2 + 0.5 * dt * f1b,
                eps,
                self.density_floor,
            )
            m1_hat = g.forward(m1 + dt * f2a)
            m2_hat = g.forward(m2 + dt * f2b)
        self._half.apply(sig_hat, m1_hat, m2_hat)
        if self._damp is not None:
            sig_hat *= self._damp
            m1_hat *= self._damp
            m2_hat *= self._damp
        rho_new = 1.0 + eps * g.inverse(sig_hat)
        new = ConservativeState(
            ScalarField(g, rho_new),
            VecField2.from_arrays(g, g.inverse(m1_hat), g.inverse(m2_hat)),
            eps,
            state.time + dt,
        )
        return new


def euler_step(
    state: ConservativeState,
    dt: float,
    law: PressureLaw | None = None,
    nonlinear: bool = True,
    hyperdiffusion: float = 0.0,
) -> ConservativeState:
    """Advance one Strang-split step; the stiff part never restricts dt."""
    ensure_finite(state.rho.values, "density")
    stepper = EulerStepper(
        state.grid,
        law or PressureLaw(),
        state.epsilon,
        dt,
        hyperdiffusion=hyperdiffusion,
        nonlinear=nonlinear,
    )
    return stepper.step(state)
