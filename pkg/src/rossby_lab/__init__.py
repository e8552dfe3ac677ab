"""rossby-lab: a pseudo-spectral laboratory for the joint low Mach / low
Rossby limit of rotating compressible flow on a periodic box.

Three solvers share one spectral foundation: the scaled compressible system
with exact propagation of its stiff skew-adjoint part, the rotating acoustic
wave system it linearizes to, and the quasi-geostrophic limit flow. The
relative-energy functional measures how fast compressible trajectories
approach the limit as the scale parameter decreases.
"""

from .acoustic import (
    AcousticState,
    acoustic_energy,
    acoustic_evolve,
    acoustic_mode_matrix,
    dispersive_decay_probe,
)
from .config import ExperimentConfig, parse_config
from .diagnostics import (
    CutoffPsi,
    RelEnergyAnsatz,
    RelEnergyRecord,
    build_ansatz,
    convergence_metrics,
    essential_residual_split,
    relative_energy,
)
from .euler import (
    ConservativeState,
    IllPreparedData,
    euler_step,
    fast_propagator,
    init_ill_prepared,
    slow_rhs,
    total_energy,
)
from .fields import (
    Grid2,
    ScalarField,
    VecField2,
    curl_h,
    dealias,
    divergence,
    gradient,
    laplacian,
    perp_gradient,
)
from .freespace import freespace_acoustic_probe
from .harness import run_convergence_sweep
from .qg import QGState, qg_rhs, qg_step, qg_velocity, solve_initial_elliptic
from .thermo import PressureLaw, pressure, pressure_potential, relative_pressure_potential

__version__ = "0.1.0"
