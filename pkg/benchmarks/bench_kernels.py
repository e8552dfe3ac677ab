#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-NumPy fallback.

Times the two hot kernels in isolation and one full splitting step end to
end, at a few grid sizes. Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from rossby_lab import kernels
from rossby_lab.euler import ConservativeState, EulerStepper
from rossby_lab.fields import Grid2, ScalarField, VecField2, random_band_limited
from rossby_lab.thermo import PressureLaw

BACKENDS = {}
BACKENDS["python"] = kernels.get_backend("python")
try:
    BACKENDS["cython"] = kernels.get_backend("cython")
except ImportError:
    pass


def timeit(fn, repeats):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_modal(backend, grid, repeats):
    rng = np.random.default_rng(1)
    shape = (grid.n, grid.n // 2 + 1)
    triple = [
        (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)).astype(np.complex128)
        for _ in range(3)
    ]
    omega = np.sqrt(1.0 + grid.k2)
    sfac = np.sin(omega * 3.0) / omega
    cfac = (1.0 - np.cos(omega * 3.0)) / omega**2
    return timeit(
        lambda: backend.modal_propagate(*triple, grid.kx, grid.ky, sfac, cfac), repeats
    )


def bench_pressure(backend, grid, gamma, repeats):
    rng = np.random.default_rng(2)
    rho = rng.uniform(0.5, 1.5, size=grid.shape)
    r = rng.uniform(0.5, 1.5, size=grid.shape)
    out = np.empty_like(rho)
    return timeit(lambda: backend.relative_pressure_grid(rho, r, gamma, out), repeats)


def bench_euler_step(backend_name, grid, repeats):
    # rebind the selected backend for the end-to-end measurement
    impl = BACKENDS[backend_name]
    saved = (kernels.modal_propagate, kernels.relative_pressure_grid, kernels.pressure_remainder_grid)
    kernels.modal_propagate = impl.modal_propagate
    kernels.relative_pressure_grid = impl.relative_pressure_grid
    kernels.pressure_remainder_grid = impl.pressure_remainder_grid
    try:
        rng = np.random.default_rng(3)
        eps = 0.1
        s0 = random_band_limited(grid, rng, 0.3)
        rho = 1.0 + eps * s0.values
        state = ConservativeState(
            ScalarField(grid, rho),
            VecField2.from_arrays(
                grid,
                rho * random_band_limited(grid, rng, 0.3).values,
                rho * random_band_limited(grid, rng, 0.3).values,
            ),
            eps,
        )
        stepper = EulerStepper(grid, PressureLaw(1.8), eps, dt=1e-3)
        return timeit(lambda: stepper.step(state), repeats)
    finally:
        kernels.modal_propagate, kernels.relative_pressure_grid, kernels.pressure_remainder_grid = saved


def main():
    print(f"available backends: {', '.join(BACKENDS)} (active: {kernels.BACKEND})")
    rows = []
    for n in (128, 256, 512):
        grid = Grid2(n=n)
        repeats = max(5, 8192 // n)
        for name, backend in BACKENDS.items():
            rows.append(
                (
                    f"{n}^2",
                    name,
                    bench_modal(backend, grid, repeats) * 1e3,
                    bench_pressure(backend, grid, 1.8, repeats) * 1e3,
                    bench_euler_step(name, grid, repeats) * 1e3,
                )
            )
    print(f"{'grid':>6} {'backend':>8} {'propagate ms':>14} {'pressure ms':>13} {'euler step ms':>15}")
    for grid_label, name, t_modal, t_press, t_step in rows:
        print(f"{grid_label:>6} {name:>8} {t_modal:>14.3f} {t_press:>13.3f} {t_step:>15.3f}")
    if len(BACKENDS) == 2:
        print("\nspeedup (python / cython):")
        for i in range(0, len(rows), 2):
            py, cy = rows[i], rows[i + 1]
            if py[1] != "python":
                py, cy = cy, py
            print(
                f"{py[0]:>6}  propagate x{py[2] / cy[2]:.1f}   "
                f"pressure x{py[3] / cy[3]:.1f}   euler step x{py[4] / cy[4]:.2f}"
            )


if __name__ == "__main__":
    main()
