"""Sweep orchestration: data recipes, determinism, CSV and summary outputs."""

import json

import numpy as np
import pytest

from rossby_lab.cli import main as cli_main
from rossby_lab.config import ExperimentConfig, GridConfig, InitialDataConfig, ModeSpec, parse_config
from rossby_lab.errors import UsageError
from rossby_lab.fields import Grid2, divergence, max_norm, perp_gradient
from rossby_lab.harness import (
    emit_report,
    gaussian_bump,
    make_initial_data,
    mode_sum_field,
    oscillatory_remainder,
    run_convergence_sweep,
    run_single_epsilon,
)
from rossby_lab.qg import solve_initial_elliptic

SMALL = ExperimentConfig(
    grid=GridConfig(n=32),
    epsilons=(0.2, 0.1),
    horizon=0.1,
    qg_dt=0.002,
)

ZERO = ExperimentConfig(
    grid=GridConfig(n=32),
    epsilons=(0.2,),
    horizon=0.1,
    qg_dt=0.002,
    initial_data=InitialDataConfig(preset="zero"),
)


class TestRecipes:
    def test_reference_data_properties(self):
        grid = Grid2(n=64)
        cfg = ExperimentConfig(grid=GridConfig(n=64))
        data = make_initial_data(cfg, grid)
        assert abs(data.s0.values.mean()) < 1e-14
        assert abs(data.phi0.values.mean()) < 1e-14
        assert max_norm(divergence(data.v0)) < 1e-12

    def test_random_preset_is_seed_deterministic(self):
        grid = Grid2(n=32)
        cfg = ExperimentConfig(
            grid=GridConfig(n=32), initial_data=InitialDataConfig(preset="random"), seed=7
        )
        a = make_initial_data(cfg, grid)
        b = make_initial_data(cfg, grid)
        assert np.array_equal(a.s0.values, b.s0.values)
        other = make_initial_data(
            ExperimentConfig(
                grid=GridConfig(n=32), initial_data=InitialDataConfig(preset="random"), seed=8
            ),
            grid,
        )
        assert not np.array_equal(a.s0.values, other.s0.values)

    def test_explicit_modes_recipe(self):
        grid = Grid2(n=32)
        ini = InitialDataConfig(
            preset=None,
            q_modes=(ModeSpec(1, 0, 0.2, 0.0),),
            s0_modes=(ModeSpec(0, 2, 0.1, 0.3),),
            phi_modes=(ModeSpec(1, 1, 0.15, 0.0),),
        )
        cfg = ExperimentConfig(grid=GridConfig(n=32), initial_data=ini)
        data = make_initial_data(cfg, grid)
        X, Y = grid.meshgrid()
        qpart = 0.2 * np.cos(X)
        extra = 0.1 * np.cos(2 * Y + 0.3)
        assert np.max(np.abs(data.s0.values - qpart - extra)) < 1e-13
        v = perp_gradient(mode_sum_field(grid, [(1, 0, 0.2, 0.0)]))
        assert np.max(np.abs(data.v0.x.values - v.x.values)) < 1e-13

    def test_oscillatory_remainder_removes_balanced_part(self, rng):
        grid = Grid2(n=32)
        cfg = ExperimentConfig(grid=GridConfig(n=32))
        data = make_initial_data(cfg, grid)
        q0 = solve_initial_elliptic(data.velocity(), data.s0)
        wave = oscillatory_remainder(data, q0, 0.1)
        # re-projecting the remainder onto balanced states gives zero
        resid_q = solve_initial_elliptic(wave.w, wave.s)
        assert max_norm(resid_q) < 1e-11

    def test_bump_is_mean_zero(self):
        grid = Grid2(n=64)
        b = gaussian_bump(grid, 1.0, grid.length / 16.0)
        assert abs(b.values.mean()) < 1e-15


class TestSweep:
    def test_zero_data_gives_zero_records(self, tmp_path):
        summary = run_convergence_sweep(ZERO, out_dir=tmp_path)
        run = summary["runs"][0]
        assert run["status"] == "ok"
        assert run["sup_E"] == 0.0
        assert run["weak_div_residual"] == 0.0
        assert run["initial_total_energy"] == 0.0

    def test_sweep_outputs_and_summary(self, tmp_path):
        summary = run_convergence_sweep(SMALL, out_dir=tmp_path)
        assert [r["epsilon"] for r in summary["runs"]] == [0.2, 0.1]
        for run in summary["runs"]:
            csv_path = tmp_path / run["csv"]
            assert csv_path.exists()
            text = csv_path.read_bytes().decode("utf-8")
            assert text.startswith("epsilon,time,E,E_kin,E_pot,div_res,bal_res\r\n")
            assert text.count("\r\n") == run["samples"] + 1
        blob = json.loads((tmp_path / "summary.json").read_text())
        assert blob == summary

    def test_byte_identical_reruns(self, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        run_convergence_sweep(SMALL, out_dir=a_dir)
        run_convergence_sweep(SMALL, out_dir=b_dir)
        for name in sorted(p.name for p in a_dir.iterdir()):
            assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()

    def test_relative_energy_starts_at_zero(self):
        res = run_single_epsilon(SMALL, 0.2)
        assert res["records"][0].e_total < 1e-20

    def test_worker_pool_matches_sequential(self, tmp_path):
        seq = run_convergence_sweep(SMALL, out_dir=tmp_path / "seq", workers=1)
        par = run_convergence_sweep(SMALL, out_dir=tmp_path / "par", workers=2)
        assert seq["runs"] == par["runs"]

    def test_emit_report_roundtrip(self, tmp_path):
        summary = {"a": 1.5, "b": [1, 2], "c": {"d": "x"}}
        text = emit_report(summary, tmp_path / "s.json")
        assert json.loads(text) == summary


class TestCLI:
    def _write_cfg(self, tmp_path, **overrides):
        base = {
            "grid": {"n": 32},
            "epsilons": [0.2],
            "horizon": 0.1,
            "qg_dt": 0.002,
            "probe": {"taus": [0.0, 1.0, 3.0], "bump_width": 0.6},
        }
        base.update(overrides)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(base))
        return str(path)

    def test_run_euler(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = tmp_path / "out"
        assert cli_main(["run-euler", "--config", cfg, "--out-dir", str(out)]) == 0
        text = (out / "euler.csv").read_bytes().decode("utf-8")
        assert text.startswith("time,mass,total_energy,min_rho,cfl\r\n")

    def test_run_qg(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = tmp_path / "out"
        assert cli_main(["run-qg", "--config", cfg, "--out-dir", str(out)]) == 0
        assert (out / "qg.csv").read_bytes().decode("utf-8").startswith("time,energy,enstrophy,mean_zeta\r\n")

    def test_run_acoustic(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = tmp_path / "out"
        assert cli_main(["run-acoustic", "--config", cfg, "--out-dir", str(out)]) == 0
        assert (out / "acoustic.csv").read_bytes().decode("utf-8").startswith(
            "time,energy,sup_s,sup_w,recurrence_flag\r\n"
        )

    def test_probe_decay(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = tmp_path / "out"
        assert cli_main(["probe-decay", "--config", cfg, "--out-dir", str(out)]) == 0
        assert (out / "decay_probe.csv").read_bytes().decode("utf-8").startswith(
            "tau,time,sup_s,sup_w,recurrence_flag\r\n"
        )

    def test_sweep_command(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = tmp_path / "out"
        assert cli_main(["sweep", "--config", cfg, "--out-dir", str(out)]) == 0
        assert (out / "summary.json").exists()

    def test_bad_config_fails_cleanly(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"gamma": -1}')
        assert cli_main(["sweep", "--config", str(path)]) == 1


class TestSnapshots:
    def test_euler_snapshot_emission(self, tmp_path):
        cfg = ExperimentConfig(
            grid=GridConfig(n=32),
            epsilons=(0.2,),
            horizon=0.1,
            qg_dt=0.002,
            snapshots_per_unit_time=20.0,
        )
        from rossby_lab.harness import run_euler_trajectory

        meta = run_euler_trajectory(cfg, 0.2, tmp_path)
        assert meta["status"] == "ok"
        assert len(meta["snapshots"]) >= 2
        from rossby_lab.snapshot import read_snapshot

        name = sorted(meta["snapshots"])[0]
        grid, fields = read_snapshot(tmp_path / name)
        assert set(fields) == {"rho", "m1", "m2"}
