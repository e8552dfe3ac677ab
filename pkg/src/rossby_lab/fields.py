"""Periodic 2-D grids, real fields, and exact spectral differential operators.

All solvers in the package share this layer. Fields live on a square torus
[0, L)^2 sampled at n points per axis; derivatives act in Fourier space and
are exact for band-limited data. Quadratic products are formed pointwise in
physical space and stabilized with the 2/3 dealiasing rule.

Everything here is a pure function of its inputs: fields are never mutated,
so values may be shared read-only across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, UsageError

__all__ = [
    "Grid2",
    "ScalarField",
    "VecField2",
    "transform_roundtrip",
    "gradient",
    "perp_gradient",
    "divergence",
    "curl_h",
    "laplacian",
    "dealias",
    "omega_cross",
    "integrate",
    "l2_norm",
    "max_norm",
    "spectral_l2sq",
    "random_band_limited",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2:
    """Square periodic grid with its signed wavenumber lattice.

    Parameters
    ----------
    n : points per axis; power of two, at least 16.
    length : physical side length L > 0.

    Real fields are stored as (n, n) float64 arrays indexed [i, j] with
    x = i * L/n along axis 0 and y = j * L/n along axis 1. Spectra use the
    half-plane real-FFT layout (n, n//2 + 1). Wavenumbers k_j = 2*pi*j/L;
    the unpaired Nyquist modes carry a zeroed wavenumber so every retained
    mode k has its partner -k (odd derivatives stay real and skew).
    """

    n: int = 128
    length: float = 2.0 * np.pi

    def __post_init__(self):
        if not _is_power_of_two(self.n) or self.n < 16:
            raise UsageError(f"grid size must be a power of two >= 16, got {self.n}")
        if not (self.length > 0.0):
            raise UsageError(f"grid length must be positive, got {self.length}")
        n, L = self.n, float(self.length)
        dx = L / n
        x1 = np.arange(n) * dx
        kx = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
        ky = 2.0 * np.pi * np.fft.rfftfreq(n, d=dx)
        kmax = np.abs(kx).max()
        # square 2/3-rule mask, applied per axis
        cut = (2.0 / 3.0) * kmax
        mask = (np.abs(kx)[:, None] <= cut) & (np.abs(ky)[None, :] <= cut)
        # derivative wavenumbers: zero the unpaired Nyquist entries
        kxd = kx.copy()
        kxd[n // 2] = 0.0
        kyd = ky.copy()
        kyd[-1] = 0.0
        kx2d = np.broadcast_to(kxd[:, None], (n, n // 2 + 1)).copy()
        ky2d = np.broadcast_to(kyd[None, :], (n, n // 2 + 1)).copy()
        k2 = kx2d**2 + ky2d**2
        kx_raw = np.broadcast_to(kx[:, None], (n, n // 2 + 1)).copy()
        ky_raw = np.broadcast_to(ky[None, :], (n, n // 2 + 1)).copy()
        # Parseval weights for the half-plane layout: interior ky columns
        # represent two conjugate modes
        w = np.full(n // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", x1)
        object.__setattr__(self, "kx", kx2d)
        object.__setattr__(self, "ky", ky2d)
        object.__setattr__(self, "kx_raw", kx_raw)
        object.__setattr__(self, "ky_raw", ky_raw)
        object.__setattr__(self, "k2", k2)
        object.__setattr__(self, "dealias_mask", mask)
        object.__setattr__(self, "cell_area", dx * dx)
        object.__setattr__(self, "_parseval_w", w[None, :])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)

    def meshgrid(self):
        """Physical coordinate arrays (X, Y), each of shape (n, n)."""
        return np.meshgrid(self.x, self.x, indexing="ij")

    def forward(self, values: np.ndarray) -> np.ndarray:
        """Real field samples -> half-plane spectrum."""
        return np.fft.rfft2(values)

    def inverse(self, hat: np.ndarray) -> np.ndarray:
        """Half-plane spectrum -> real field samples."""
        return np.fft.irfft2(hat, s=self.shape)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real scalar samples bound to a grid."""

    grid: Grid2
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise UsageError(f"field shape {v.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, grid: Grid2) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def from_function(cls, grid: Grid2, fn) -> "ScalarField":
        X, Y = grid.meshgrid()
        return cls(grid, np.asarray(fn(X, Y), dtype=np.float64))

    def hat(self) -> np.ndarray:
        return self.grid.forward(self.values)


@dataclass(frozen=True, eq=False)
class VecField2:
    """Horizontal vector field with two scalar components on one grid."""

    x: ScalarField
    y: ScalarField

    def __post_init__(self):
        if self.x.grid != self.y.grid:
            raise UsageError("vector components live on different grids")

    @property
    def grid(self) -> Grid2:
        return self.x.grid

    @classmethod
    def zeros(cls, grid: Grid2) -> "VecField2":
        return cls(ScalarField.zeros(grid), ScalarField.zeros(grid))

    @classmethod
    def from_arrays(cls, grid: Grid2, vx: np.ndarray, vy: np.ndarray) -> "VecField2":
        return cls(ScalarField(grid, vx), ScalarField(grid, vy))

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.x.values, self.y.values)


def ensure_finite(values: np.ndarray, what: str = "field") -> None:
    if not np.all(np.isfinite(values)):
        raise DataError(f"{what} contains non-finite values")


def same_grid(a, b) -> Grid2:
    ga = a.grid
    if ga != b.grid:
        raise UsageError("operands live on different grids")
    return ga


def transform_roundtrip(f: ScalarField) -> ScalarField:
    """Inverse of the forward transform; identity to round-off."""
    ensure_finite(f.values)
    return ScalarField(f.grid, f.grid.inverse(f.grid.forward(f.values)))


def _dx_hat(grid: Grid2, hat: np.ndarray) -> np.ndarray:
    return 1j * grid.kx * hat


def _dy_hat(grid: Grid2, hat: np.ndarray) -> np.ndarray:
    return 1j * grid.ky * hat


def gradient(f: ScalarField) -> VecField2:
    """Spectral gradient (d/dx f, d/dy f)."""
    g, hat = f.grid, f.hat()
    return VecField2.from_arrays(g, g.inverse(_dx_hat(g, hat)), g.inverse(_dy_hat(g, hat)))


def perp_gradient(f: ScalarField) -> VecField2:
    """Rotated gradient (-d/dy f, d/dx f); always divergence-free."""
    g, hat = f.grid, f.hat()
    return VecField2.from_arrays(g, -g.inverse(_dy_hat(g, hat)), g.inverse(_dx_hat(g, hat)))


def divergence(v: VecField2) -> ScalarField:
    g = same_grid(v.x, v.y)
    hat = _dx_hat(g, v.x.hat()) + _dy_hat(g, v.y.hat())
    return ScalarField(g, g.inverse(hat))


def curl_h(v: VecField2) -> ScalarField:
    """Scalar (vertical) curl d/dx v_y - d/dy v_x."""
    g = same_grid(v.x, v.y)
    hat = _dx_hat(g, v.y.hat()) - _dy_hat(g, v.x.hat())
    return ScalarField(g, g.inverse(hat))


def laplacian(f: ScalarField) -> ScalarField:
    g = f.grid
    return ScalarField(g, g.inverse(-g.k2 * f.hat()))


def dealias(f: ScalarField) -> ScalarField:
    """Zero every mode above 2/3 of the per-axis maximum wavenumber."""
    g = f.grid
    return ScalarField(g, g.inverse(g.dealias_mask * f.hat()))


def omega_cross(v: VecField2) -> VecField2:
    """Horizontal action of the vertical rotation axis: (a, b) -> (-b, a)."""
    g = v.grid
    return VecField2.from_arrays(g, -v.y.values, v.x.values.copy())


def integrate(f: ScalarField) -> float:
    """Torus integral; exact for band-limited integrands."""
    return float(np.sum(f.values)) * f.grid.cell_area


def l2_norm(f: ScalarField) -> float:
    return float(np.sqrt(np.sum(f.values**2) * f.grid.cell_area))


def max_norm(f: ScalarField) -> float:
    return float(np.max(np.abs(f.values)))


def spectral_l2sq(grid: Grid2, hat: np.ndarray) -> float:
    """Integral of f^2 evaluated from the half-plane spectrum (Parseval)."""
    s = np.sum(grid._parseval_w * (hat.real**2 + hat.imag**2))
    return float(s) * grid.cell_area / grid.n**2


def random_band_limited(
    grid: Grid2,
    rng: np.random.Generator,
    amplitude: float = 1.0,
    kmax_frac: float = 0.5,
    mean_zero: bool = True,
) -> ScalarField:
    """Random smooth field with spectrum confined below kmax_frac * Nyquist."""
    n = grid.n
    hat = np.zeros((n, n // 2 + 1), dtype=np.complex128)
    kmax = np.pi * n / grid.length
    keep = (np.abs(grid.kx_raw) <= kmax_frac * kmax) & (
        np.abs(grid.ky_raw) <= kmax_frac * kmax
    )
    hat[keep] = rng.standard_normal(keep.sum()) + 1j * rng.standard_normal(keep.sum())
    if mean_zero:
        hat[0, 0] = 0.0
    vals = grid.inverse(hat)
    peak = np.max(np.abs(vals))
    if peak > 0:
        vals *= amplitude / peak
    return ScalarField(grid, vals)
