"""Free-space quadrature oracle: data reproduction, decay trend, convergence
control, and agreement with the torus solver inside the recurrence horizon."""

import numpy as np
import pytest

from rossby_lab.acoustic import AcousticState, acoustic_evolve
from rossby_lab.errors import QuadratureError, UsageError
from rossby_lab.fields import Grid2, ScalarField, gradient
from rossby_lab.freespace import freespace_acoustic_probe, patch_coordinates
from rossby_lab.harness import gaussian_bump


def radial_bump_patch(npatch=64, spacing=0.25, sigma=1.0, amplitude=1.0):
    xs = patch_coordinates(npatch, spacing)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    return amplitude * np.exp(-(X**2 + Y**2) / (2.0 * sigma**2))


PROBE_POINTS = [(0.0, 0.0)] + [
    (r * np.cos(a), r * np.sin(a))
    for r in (1.0, 2.0, 3.0)
    for a in np.linspace(0.0, 2.0 * np.pi, 6, endpoint=False)
]


class TestReproduction:
    def test_initial_data_reproduced(self):
        phi = radial_bump_patch()
        s0 = 0.3 * radial_bump_patch(sigma=0.8)
        res = freespace_acoustic_probe(s0, phi, 0.25, 0.0, PROBE_POINTS, tol=1e-8)
        # s at the points equals the bump; w equals grad(phi)
        pts = np.array(PROBE_POINTS)
        r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
        expected_s = 0.3 * np.exp(-r2 / (2 * 0.8**2))
        expected_w1 = -pts[:, 0] * np.exp(-r2 / 2.0)
        assert np.max(np.abs(res["s"] - expected_s)) < 1e-6
        assert np.max(np.abs(res["w1"] - expected_w1)) < 1e-6

    def test_point_count_limited(self):
        phi = radial_bump_patch(npatch=32)
        pts = [(0.1 * i, 0.0) for i in range(65)]
        with pytest.raises(UsageError):
            freespace_acoustic_probe(np.zeros_like(phi), phi, 0.25, 1.0, pts)


class TestDecay:
    def test_monotone_decay_of_point_sup(self):
        # pure-potential bump: no balanced remnant, everything radiates
        phi = radial_bump_patch()
        s0 = np.zeros_like(phi)
        sups = []
        for tau in (5.0, 10.0, 20.0, 35.0, 50.0):
            res = freespace_acoustic_probe(s0, phi, 0.25, tau, PROBE_POINTS, tol=1e-7)
            sups.append(max(np.max(np.abs(res["s"])), np.max(np.hypot(res["w1"], res["w2"]))))
        assert all(a > b for a, b in zip(sups, sups[1:]))

    def test_long_time_much_smaller_than_early(self):
        phi = radial_bump_patch()
        s0 = np.zeros_like(phi)
        early = freespace_acoustic_probe(s0, phi, 0.25, 1.0, PROBE_POINTS, tol=1e-7)
        late = freespace_acoustic_probe(s0, phi, 0.25, 50.0, PROBE_POINTS, tol=1e-7)
        for key in ("s", "w1"):
            assert np.max(np.abs(late[key])) < 0.2 * np.max(np.abs(early[key]))


class TestQuadratureControl:
    def test_non_convergence_reports_achieved_tolerance(self):
        phi = radial_bump_patch(npatch=32)
        with pytest.raises(QuadratureError) as err:
            freespace_acoustic_probe(
                np.zeros_like(phi), phi, 0.25, 40.0, PROBE_POINTS,
                tol=1e-30, start_nodes=32, max_nodes=128,
            )
        assert err.value.achieved > 1e-30
        assert err.value.requested == 1e-30


class TestCrossOracle:
    def test_agrees_with_torus_before_recurrence(self):
        # torus 16x the bump support: free-space and periodic solutions match
        sigma, L, n = 0.5, 64.0, 1024
        grid = Grid2(n=n, length=L)
        bump = gaussian_bump(grid, 1.0, sigma, mean_zero=True)
        state = AcousticState.from_potential(ScalarField.zeros(grid), bump, epsilon=1.0)
        ev = acoustic_evolve(state, 6.0)

        npatch, h = 128, grid.dx * 2
        phi_patch = radial_bump_patch(npatch, h, sigma)
        offs = [(0, 0), (4, 0), (0, 6), (-8, 2), (12, 12), (-16, -10)]
        pts = [(dx * grid.dx, dy * grid.dx) for dx, dy in offs]
        res = freespace_acoustic_probe(np.zeros_like(phi_patch), phi_patch, h, 6.0, pts, tol=1e-6)
        c = n // 2
        torus_s = np.array([ev.s.values[c + dx, c + dy] for dx, dy in offs])
        torus_w1 = np.array([ev.w.x.values[c + dx, c + dy] for dx, dy in offs])
        assert np.max(np.abs(torus_s - res["s"])) < 1e-3
        assert np.max(np.abs(torus_w1 - res["w1"])) < 1e-3

    def test_gradient_data_consistency(self):
        # the torus gradient of the bump agrees with the analytic gradient the
        # oracle implies at tau = 0
        grid = Grid2(n=256, length=32.0)
        bump = gaussian_bump(grid, 1.0, 1.0, mean_zero=True)
        gb = gradient(bump)
        c = 256 // 2
        X, _ = grid.meshgrid()
        x0 = X[c + 8, c] - grid.length / 2.0
        analytic = -x0 * np.exp(-(x0**2) / 2.0)
        assert abs(gb.x.values[c + 8, c] - analytic) < 1e-10
