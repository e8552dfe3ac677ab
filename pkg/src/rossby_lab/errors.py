"""Exception types shared across the laboratory."""


class RossbyLabError(Exception):
    """Base class for all errors raised by this package."""


class DataError(RossbyLabError):
    """Field data is unusable (non-finite values, wrong shape, bad file)."""


class DomainError(RossbyLabError):
    """A scalar argument lies outside the mathematical domain of an operation."""


class UsageError(RossbyLabError):
    """Incompatible arguments (grid mismatch, epsilon mismatch, bad call)."""


class ConfigError(RossbyLabError):
    """Invalid configuration; the message names the offending key path."""


class CFLError(RossbyLabError):
    """Advective CFL bound violated."""

    def __init__(self, cfl: float, limit: float, dt: float):
        self.cfl = cfl
        self.limit = limit
        self.dt = dt
        super().__init__(
            f"advective CFL number {cfl:.6g} exceeds limit {limit:.6g} at dt={dt:.6g}"
        )


class DensityFloorError(RossbyLabError):
    """Density dropped below the configured floor; carries the offending state."""

    def __init__(self, min_rho: float, floor: float, state=None):
        self.min_rho = min_rho
        self.floor = floor
        self.state = state
        super().__init__(f"density minimum {min_rho:.6g} fell below floor {floor:.6g}")


class QuadratureError(RossbyLabError):
    """Adaptive quadrature failed to converge; reports the achieved tolerance."""

    def __init__(self, achieved: float, requested: float):
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"quadrature reached tolerance {achieved:.3e}, requested {requested:.3e}"
        )
