"""Spectral foundation: transforms, derivatives, dealiasing, quadrature."""

import numpy as np
import pytest

from rossby_lab.errors import DataError, UsageError
from rossby_lab.fields import (
    Grid2,
    ScalarField,
    VecField2,
    curl_h,
    dealias,
    divergence,
    gradient,
    integrate,
    laplacian,
    max_norm,
    perp_gradient,
    random_band_limited,
    spectral_l2sq,
    transform_roundtrip,
)


def direct_dft2(values: np.ndarray) -> np.ndarray:
    """O(n^4) direct DFT, the independent oracle for the transform pair."""
    n = values.shape[0]
    j = np.arange(n)
    w = np.exp(-2j * np.pi * np.outer(j, j) / n)
    return w @ values @ w.T


class TestGrid:
    def test_rejects_bad_sizes(self):
        for n in (8, 12, 20, 17, 0):
            with pytest.raises(UsageError):
                Grid2(n=n)
        with pytest.raises(UsageError):
            Grid2(n=32, length=-1.0)

    def test_wavenumber_lattice_symmetric(self):
        g = Grid2(n=32, length=5.0)
        kx_col = g.kx[:, 0]
        present = set(np.round(kx_col, 12))
        for k in present:
            assert -k in present
        # unpaired Nyquist entries are zeroed
        assert kx_col[16] == 0.0
        assert g.ky[0, -1] == 0.0

    def test_forward_matches_direct_dft(self, rng):
        g = Grid2(n=16, length=2.0 * np.pi)
        f = rng.standard_normal((16, 16))
        full = direct_dft2(f)
        half = g.forward(f)
        assert np.max(np.abs(full[:, : 16 // 2 + 1] - half)) < 1e-10


class TestTransformRoundtrip:
    def test_zero_fixed_point(self, grid32):
        f = ScalarField.zeros(grid32)
        assert np.array_equal(transform_roundtrip(f).values, f.values)

    def test_single_mode_exact(self, grid32):
        X, _ = grid32.meshgrid()
        f = ScalarField(grid32, np.cos(2.0 * np.pi * X / grid32.length))
        err = max_norm(ScalarField(grid32, transform_roundtrip(f).values - f.values))
        assert err < 1e-12 * max_norm(f)

    def test_random_band_limited(self, grid64, rng):
        f = random_band_limited(grid64, rng)
        err = np.max(np.abs(transform_roundtrip(f).values - f.values))
        assert err < 1e-12 * max_norm(f)

    def test_rejects_non_finite(self, grid32):
        vals = np.zeros(grid32.shape)
        vals[3, 4] = np.nan
        with pytest.raises(DataError):
            transform_roundtrip(ScalarField(grid32, vals))


class TestDerivatives:
    def test_gradient_single_mode(self, grid32):
        L = grid32.length
        X, _ = grid32.meshgrid()
        f = ScalarField(grid32, np.cos(2.0 * np.pi * X / L))
        gr = gradient(f)
        expected = -(2.0 * np.pi / L) * np.sin(2.0 * np.pi * X / L)
        assert np.max(np.abs(gr.x.values - expected)) < 1e-12
        assert np.max(np.abs(gr.y.values)) < 1e-14

    def test_laplacian_eigenfunction(self, grid32):
        L = grid32.length
        X, Y = grid32.meshgrid()
        k = (2.0 * np.pi / L) * np.array([2.0, 1.0])
        f = ScalarField(grid32, np.cos(k[0] * X + k[1] * Y))
        lap = laplacian(f)
        assert np.max(np.abs(lap.values + (k @ k) * f.values)) < 1e-11

    def test_divergence_of_perp_gradient_vanishes(self, grid64, rng):
        f = random_band_limited(grid64, rng)
        assert max_norm(divergence(perp_gradient(f))) < 1e-12

    def test_curl_of_gradient_vanishes(self, grid64, rng):
        f = random_band_limited(grid64, rng)
        assert max_norm(curl_h(gradient(f))) < 1e-12

    def test_perp_gradient_orthogonal_pointwise(self, grid64, rng):
        f = random_band_limited(grid64, rng)
        gr, pg = gradient(f), perp_gradient(f)
        dot = gr.x.values * pg.x.values + gr.y.values * pg.y.values
        assert np.max(np.abs(dot)) < 1e-12

    def test_operators_commute(self, grid32, rng):
        f = random_band_limited(grid32, rng)
        a = laplacian(gradient(f).x)
        b = gradient(laplacian(f)).x
        assert np.max(np.abs(a.values - b.values)) < 1e-10

    def test_grid_mismatch_rejected(self, grid32, grid64):
        with pytest.raises(UsageError):
            VecField2(ScalarField.zeros(grid32), ScalarField.zeros(grid64))


class TestDealias:
    def test_band_limited_unchanged(self, grid32, rng):
        f = random_band_limited(grid32, rng, kmax_frac=0.6)
        assert np.max(np.abs(dealias(f).values - f.values)) < 1e-13

    def test_nyquist_mode_zeroed(self, grid32):
        hat = np.zeros((32, 17), dtype=np.complex128)
        hat[16, 0] = 1.0  # pure Nyquist-in-x mode
        f = ScalarField(grid32, grid32.inverse(hat))
        assert max_norm(dealias(f)) < 1e-14

    def test_idempotent(self, grid32, rng):
        f = ScalarField(grid32, rng.standard_normal(grid32.shape))
        once = dealias(f)
        twice = dealias(once)
        assert np.max(np.abs(twice.values - once.values)) < 1e-13 * max_norm(once)


class TestQuadrature:
    def test_parseval(self, grid64, rng):
        f = random_band_limited(grid64, rng)
        phys = integrate(ScalarField(grid64, f.values**2))
        spec = spectral_l2sq(grid64, f.hat())
        assert abs(phys - spec) < 1e-10 * abs(phys)

    def test_cosine_integral(self, grid32):
        X, _ = grid32.meshgrid()
        f = ScalarField(grid32, np.cos(X) ** 2)
        assert abs(integrate(f) - 2.0 * np.pi**2) < 1e-12


class TestRandomBandLimited:
    def test_mean_zero_and_confined(self, grid64, rng):
        f = random_band_limited(grid64, rng, kmax_frac=0.4)
        assert abs(f.values.mean()) < 1e-14
        hat = f.hat()
        kmax = np.pi * grid64.n / grid64.length
        outside = (np.abs(grid64.kx_raw) > 0.4 * kmax) | (
            np.abs(grid64.ky_raw) > 0.4 * kmax
        )
        assert np.max(np.abs(hat[outside])) < 1e-10
